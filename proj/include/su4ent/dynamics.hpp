#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "su4ent/basis.hpp"
#include "su4ent/operators.hpp"

namespace su4ent {

struct IntegratorOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  std::size_t max_steps = 100'000'000;
};

/// Hamiltonian plus jump operators with their rates already absorbed
/// (e.g. L_d = sqrt(Gamma_c) G_{(-)x}).
struct LindbladGenerator {
  CollectiveOperator hamiltonian;
  std::vector<CollectiveOperator> jumps;
  /// Slowest physical rate of the model; sets the default steady-state horizon.
  double characteristic_rate = 1.0;

  const BasisPtr& basis() const { return hamiltonian.basis; }
  /// Throws unless all operators share one space and H is Hermitian.
  void validate() const;
};

struct IntegratorStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double last_step = 0;
};

template <typename State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  IntegratorStats stats;
};

/// i d psi/dt = H psi (hbar = 1). `times` must be strictly increasing; the
/// state at times[0] is psi0.
Trajectory<StateVector> evolve_schrodinger(const CollectiveOperator& h, const StateVector& psi0,
                                           std::span<const double> times,
                                           const IntegratorOptions& opts = {});

/// d rho/dt = -i[H, rho] + sum_k D[L_k] rho, symmetrized after every step.
Trajectory<DensityMatrix> evolve_lindblad(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                          std::span<const double> times,
                                          const IntegratorOptions& opts = {});

/// L(rho) for Hermitian rho.
CMatrix apply_liouvillian(const LindbladGenerator& gen, const CMatrix& rho);

enum class SteadyMethod {
  Explicit,  // adaptive RK 4/5 marching with doubling checkpoints
  Implicit,  // backward Euler with doubling steps; for stiff generators
};

struct SteadyStateOptions {
  SteadyMethod method = SteadyMethod::Explicit;
  double tolerance = 1e-9;
  /// 0 selects 200 / characteristic_rate.
  double max_time = 0;
  /// 0 selects 1 / characteristic_rate; checkpoints double from here.
  double first_checkpoint = 0;
  IntegratorOptions integrator{};
};

struct SteadyStateResult {
  DensityMatrix rho;
  double residual = 0;  // max |L(rho)| entry
  double time = 0;
  IntegratorStats stats;
  double final_abs_tol = 0;  // tolerances in force at the end
  double final_rel_tol = 0;
};

/// Long-time integration until max |L(rho)| <= tolerance at a checkpoint.
/// Explicit: when the residual stalls between checkpoints the integrator
/// tolerances are tightened tenfold (down to 1e-14).
/// Implicit: backward Euler steps of 1, 2, 4, ... / characteristic_rate on the
/// sparse superoperator. It keeps the kernel of L and every conserved quantity,
/// so it reaches the same attractor, but damps purely oscillating modes that
/// exact dynamics would keep. max_time does not apply; at most 60 steps.
SteadyStateResult steady_state(const LindbladGenerator& gen, const DensityMatrix& rho0,
                               const SteadyStateOptions& opts = {});

namespace ode {

/// Real-packed state: interleaved (re, im) of a complex array.
using Packed = Eigen::VectorXd;
using Rhs = std::function<void(const Packed& x, Packed& dxdt, double t)>;
/// Called after each accepted step; may modify the state.
using PostStep = std::function<void(Packed& x)>;
/// Called at each requested output time.
using Observer = std::function<void(std::size_t index, const Packed& x)>;

/// Adaptive Dormand-Prince 5(4) integration from times[0] through every
/// entry of `times`, observing the state at each.
IntegratorStats integrate(const Rhs& rhs, Packed& x, std::span<const double> times,
                          const IntegratorOptions& opts, const PostStep& post_step,
                          const Observer& observe);

inline Eigen::Map<CVector> as_complex(Packed& x) {
  return {reinterpret_cast<Complex*>(x.data()), x.size() / 2};
}
inline Eigen::Map<const CVector> as_complex(const Packed& x) {
  return {reinterpret_cast<const Complex*>(x.data()), x.size() / 2};
}
inline Eigen::Map<CMatrix> as_matrix(Packed& x, Eigen::Index dim) {
  return {reinterpret_cast<Complex*>(x.data()), dim, dim};
}
inline Eigen::Map<const CMatrix> as_matrix(const Packed& x, Eigen::Index dim) {
  return {reinterpret_cast<const Complex*>(x.data()), dim, dim};
}

}  // namespace ode

}  // namespace su4ent
