#include "su4ent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include "su4ent/linalg.hpp"

namespace su4ent {

namespace odeint = boost::numeric::odeint;

namespace {

void check_times(std::span<const double> times) {
  if (times.empty()) throw InvalidArgument("time grid is empty");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidArgument("time grid must be strictly increasing");
}

ode::Packed pack(const CVector& v) {
  ode::Packed x(2 * v.size());
  ode::as_complex(x) = v;
  return x;
}

ode::Packed pack(const CMatrix& m) {
  ode::Packed x(2 * m.size());
  ode::as_matrix(x, m.rows()) = m;
  return x;
}

// Precomputed pieces of the Lindblad right-hand side.
class LindbladRhs {
 public:
  SparseC h_eff;  // H - (i/2) sum L^dag L
  std::vector<SparseC> jumps;
  Eigen::Index dim = 0;

  explicit LindbladRhs(const LindbladGenerator& gen) {
    dim = gen.hamiltonian.matrix.rows();
    h_eff = gen.hamiltonian.matrix;
    for (const auto& l : gen.jumps) {
      jumps.push_back(l.matrix);
      SparseC ldl = SparseC(l.matrix.adjoint()) * l.matrix;
      h_eff -= Complex(0.0, 0.5) * ldl;
    }
    h_eff.makeCompressed();
  }

  // For Hermitian rho the generator is A + A^dag with
  // A = -i H_eff rho + (1/2) sum L rho L^dag, and L rho L^dag = L (L rho)^dag.
  void apply(const Eigen::Ref<const CMatrix>& rho, Eigen::Ref<CMatrix> out) const {
    a_.resize(dim, dim);
    a_.noalias() = h_eff * rho;
    a_ *= -kI;
    for (const auto& l : jumps) {
      tmp_.noalias() = l * rho;
      tmp_adj_ = tmp_.adjoint();
      a_.noalias() += 0.5 * (l * tmp_adj_);
    }
    out = a_;
    out += a_.adjoint();
  }

  // Superoperator on vec(rho) (column-major): vec(A rho B) = (B^T kron A) vec(rho).
  SparseC superoperator() const {
    std::vector<Eigen::Triplet<Complex>> trips;
    const auto add = [&](const SparseC& a, const SparseC& b) {
      for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
          for (int kb = 0; kb < b.outerSize(); ++kb)
            for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
              // out(i, j) += A(i, k) rho(k, l) B(l, j)
              trips.emplace_back(ia.row() + dim * ib.col(), ia.col() + dim * ib.row(),
                                 ia.value() * ib.value());
    };
    SparseC eye(dim, dim);
    eye.setIdentity();
    add(SparseC(-kI * h_eff), eye);
    add(eye, SparseC(kI * SparseC(h_eff.adjoint())));
    for (const auto& l : jumps) add(l, SparseC(l.adjoint()));
    SparseC op(dim * dim, dim * dim);
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
  }

 private:
  mutable CMatrix a_, tmp_, tmp_adj_;
};

constexpr double kMinSteadyTolerance = 1e-14;
constexpr std::size_t kMaxImplicitSteps = 60;

void symmetrize(ode::Packed& x, Eigen::Index dim) {
  auto rho = ode::as_matrix(x, dim);
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  rho = herm;
}

void check_trace(const ode::Packed& x, Eigen::Index dim) {
  const Complex tr = ode::as_matrix(x, dim).trace();
  if (!std::isfinite(tr.real()) || std::abs(tr - Complex(1.0)) > 1e-6)
    throw NumericalError("Lindblad integration diverged: trace = " + std::to_string(tr.real()));
}

}  // namespace

void LindbladGenerator::validate() const {
  if (!hamiltonian.basis) throw InvalidArgument("Lindblad generator has no basis");
  const auto dim = hamiltonian.matrix.rows();
  if (hamiltonian.matrix.cols() != dim) throw InvalidArgument("Hamiltonian is not square");
  if (hermitian_residual(hamiltonian.matrix) > 1e-12)
    throw InvalidArgument("Hamiltonian is not Hermitian");
  for (const auto& l : jumps)
    if (l.matrix.rows() != dim || l.matrix.cols() != dim ||
        (l.basis && l.basis->n() != hamiltonian.basis->n()))
      throw InvalidArgument("jump operator " + l.label + " lives on a different space");
}

IntegratorStats ode::integrate(const Rhs& rhs, Packed& x, std::span<const double> times,
                               const IntegratorOptions& opts, const PostStep& post_step,
                               const Observer& observe) {
  check_times(times);
  using Stepper = odeint::runge_kutta_dopri5<Packed, double, Packed, double,
                                             odeint::vector_space_algebra>;
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, Stepper());
  auto system = [&rhs](const Packed& s, Packed& d, double t) {
    d.resize(s.size());
    rhs(s, d, t);
  };

  IntegratorStats stats;
  double t = times[0];
  double dt = opts.initial_step;
  if (observe) observe(0, x);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double target = times[i];
    while (t < target) {
      if (stats.accepted_steps + stats.rejected_steps >= opts.max_steps)
        throw NumericalError("integrator exceeded the step budget");
      const double remaining = target - t;
      const bool clamped = remaining <= dt;
      double trial = clamped ? remaining : dt;
      const double start = t;
      if (stepper.try_step(system, x, t, trial) == odeint::success) {
        ++stats.accepted_steps;
        stats.last_step = t - start;
        if (clamped) {
          t = target;
          dt = std::max(dt, trial);
        } else {
          dt = trial;
        }
        if (post_step) {
          post_step(x);
          stepper.reset();
        }
      } else {
        ++stats.rejected_steps;
        dt = trial;
        if (dt < opts.min_step)
          throw NumericalError("step-size underflow at t=" + std::to_string(t));
      }
    }
    if (observe) observe(i, x);
  }
  return stats;
}

Trajectory<StateVector> evolve_schrodinger(const CollectiveOperator& h, const StateVector& psi0,
                                           std::span<const double> times,
                                           const IntegratorOptions& opts) {
  if (h.matrix.rows() != psi0.amplitudes.size())
    throw InvalidArgument("evolve_schrodinger: dimension mismatch");
  if (hermitian_residual(h.matrix) > 1e-12)
    throw InvalidArgument("evolve_schrodinger: Hamiltonian is not Hermitian");
  const SparseC& hm = h.matrix;
  auto rhs = [&hm](const ode::Packed& x, ode::Packed& d, double) {
    ode::as_complex(d).noalias() = -kI * (hm * ode::as_complex(x));
  };
  Trajectory<StateVector> traj;
  traj.times.assign(times.begin(), times.end());
  ode::Packed x = pack(psi0.amplitudes);
  traj.stats = ode::integrate(rhs, x, times, opts, nullptr,
                              [&](std::size_t, const ode::Packed& s) {
                                traj.states.push_back({psi0.basis, ode::as_complex(s)});
                              });
  return traj;
}

CMatrix apply_liouvillian(const LindbladGenerator& gen, const CMatrix& rho) {
  const LindbladRhs lr(gen);
  CMatrix out(rho.rows(), rho.cols());
  lr.apply(rho, out);
  return out;
}

Trajectory<DensityMatrix> evolve_lindblad(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                          std::span<const double> times,
                                          const IntegratorOptions& opts) {
  gen.validate();
  const auto dim = gen.hamiltonian.matrix.rows();
  if (rho0.entries.rows() != dim) throw InvalidArgument("evolve_lindblad: dimension mismatch");
  check_density_matrix(rho0.entries, 1e-8);
  const LindbladRhs lr(gen);
  auto rhs = [&lr, dim](const ode::Packed& x, ode::Packed& d, double) {
    lr.apply(ode::as_matrix(x, dim), ode::as_matrix(d, dim));
  };
  auto post = [dim](ode::Packed& x) {
    symmetrize(x, dim);
    check_trace(x, dim);
  };
  Trajectory<DensityMatrix> traj;
  traj.times.assign(times.begin(), times.end());
  ode::Packed x = pack(rho0.entries);
  traj.stats = ode::integrate(rhs, x, times, opts, post, [&](std::size_t, const ode::Packed& s) {
    traj.states.push_back({rho0.basis, ode::as_matrix(s, dim)});
  });
  return traj;
}

SteadyStateResult steady_state(const LindbladGenerator& gen, const DensityMatrix& rho0,
                               const SteadyStateOptions& opts) {
  gen.validate();
  const auto dim = gen.hamiltonian.matrix.rows();
  if (rho0.entries.rows() != dim) throw InvalidArgument("steady_state: dimension mismatch");
  if (!(gen.characteristic_rate > 0)) throw InvalidArgument("steady_state: rate must be positive");
  const double horizon = opts.max_time > 0 ? opts.max_time : 200.0 / gen.characteristic_rate;
  double checkpoint =
      opts.first_checkpoint > 0 ? opts.first_checkpoint : 1.0 / gen.characteristic_rate;

  const LindbladRhs lr(gen);
  auto rhs = [&lr, dim](const ode::Packed& x, ode::Packed& d, double) {
    lr.apply(ode::as_matrix(x, dim), ode::as_matrix(d, dim));
  };
  auto post = [dim](ode::Packed& x) {
    symmetrize(x, dim);
    check_trace(x, dim);
  };
  auto residual_of = [&](const ode::Packed& x) {
    CMatrix d(dim, dim);
    lr.apply(ode::as_matrix(x, dim), d);
    return d.cwiseAbs().maxCoeff();
  };

  SteadyStateResult result;
  ode::Packed x = pack(rho0.entries);
  double t = 0;
  if (opts.method == SteadyMethod::Implicit) {
    // Backward Euler, rho <- (I - h L)^-1 rho, with h doubling every step.
    const SparseC lop = lr.superoperator();
    SparseC eye(lop.rows(), lop.cols());
    eye.setIdentity();
    SparseC m = eye - lop;
    m.makeCompressed();
    Eigen::SparseLU<SparseC> lu;
    lu.analyzePattern(m);
    double h = checkpoint;
    result.residual = residual_of(x);
    while (result.residual > opts.tolerance) {
      if (result.stats.accepted_steps >= kMaxImplicitSteps)
        throw NumericalError("implicit steady-state marching did not converge (residual " +
                             std::to_string(result.residual) + ")");
      m = eye - h * lop;
      lu.factorize(m);
      if (lu.info() != Eigen::Success) throw NumericalError("sparse LU of I - hL failed");
      CVector v = lu.solve(CVector(ode::as_complex(x)));
      ode::as_complex(x) = v;
      post(x);
      t += h;
      result.stats.last_step = h;
      ++result.stats.accepted_steps;
      h *= 2;
      result.residual = residual_of(x);
    }
    result.time = t;
    result.rho = {rho0.basis, ode::as_matrix(x, dim)};
    return result;
  }

  IntegratorOptions integ = opts.integrator;
  bool tightened = false;
  result.residual = residual_of(x);
  while (result.residual > opts.tolerance) {
    if (t >= horizon)
      throw NumericalError("steady state not reached by t=" + std::to_string(horizon) +
                           " (residual " + std::to_string(result.residual) + ")");
    // Doubling checkpoints; after a tolerance change one short segment suffices
    // for the fast modes to shed the old error floor.
    const double next = std::min(tightened ? t + checkpoint : std::max(checkpoint, t * 2), horizon);
    const double seg[2] = {t, next};
    const auto stats = ode::integrate(rhs, x, seg, integ, post, nullptr);
    result.stats.accepted_steps += stats.accepted_steps;
    result.stats.rejected_steps += stats.rejected_steps;
    result.stats.last_step = stats.last_step;
    t = next;
    const double previous = result.residual;
    result.residual = residual_of(x);
    // A stalled residual means the integration error, amplified by the stiff
    // generator, dominates: tighten the tolerances.
    tightened = result.residual > opts.tolerance && result.residual > 0.5 * previous &&
                std::min(integ.abs_tol, integ.rel_tol) > kMinSteadyTolerance;
    if (tightened) {
      integ.abs_tol = std::max(integ.abs_tol / 10, kMinSteadyTolerance);
      integ.rel_tol = std::max(integ.rel_tol / 10, kMinSteadyTolerance);
    }
  }
  result.final_abs_tol = integ.abs_tol;
  result.final_rel_tol = integ.rel_tol;
  result.time = t;
  result.rho = {rho0.basis, ode::as_matrix(x, dim)};
  return result;
}

}  // namespace su4ent
