#include "su4ent/models.hpp"

#include <array>
#include <cmath>

namespace su4ent {

namespace {

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

}  // namespace

void ModelParams::validate() const {
  if (n < 1) throw InvalidArgument("N must be at least 1");
  for (double r : {delta, omega, chi, gamma_c, w})
    if (!std::isfinite(r)) throw InvalidArgument("model rates must be finite");
  if (gamma_c < 0) throw InvalidArgument("Gamma_c must be non-negative");
  if (w < 0) throw InvalidArgument("W must be non-negative");
}

CollectiveOperator h_illustrative(const BasisPtr& basis, const ModelParams& p) {
  p.validate();
  const std::array ops{collective_generator(basis, Pauli::Z, Pauli::I),
                       collective_generator(basis, Pauli::X, Pauli::X)};
  const std::array<Complex, 2> c{p.delta / 2, p.omega / 2};
  auto h = linear_combination(ops, c);
  h.label = "H_IE";
  return h;
}

double analytic_entropy_ie(const ModelParams& p, double t) {
  if (p.delta != 0) throw InvalidArgument("analytic entropy only holds for Delta = 0");
  const double c = std::pow(std::cos(p.omega * t / 2), 2);
  const double s = 1.0 - c;
  return std::max(0.0, -p.n * (xlogx(c) + xlogx(s)));
}

CollectiveOperator h_boat(const BasisPtr& basis, const ModelParams& p) {
  p.validate();
  auto h = product(collective_generator(basis, Pauli::Plus, Pauli::X),
                   collective_generator(basis, Pauli::Minus, Pauli::X));
  h.matrix *= p.chi;
  h.label = "H_BOAT";
  return h;
}

LindbladGenerator leaky_boat(const BasisPtr& basis, const ModelParams& p) {
  p.validate();
  LindbladGenerator gen;
  gen.hamiltonian = h_boat(basis, p);
  if (p.gamma_c > 0) {
    auto l = collective_generator(basis, Pauli::Minus, Pauli::X);
    l.matrix *= std::sqrt(p.gamma_c);
    l.label = "L_d";
    gen.jumps.push_back(std::move(l));
  }
  const double chi = std::abs(p.chi);
  const double lo = std::min(chi > 0 ? chi : HUGE_VAL, p.gamma_c > 0 ? p.gamma_c : HUGE_VAL);
  gen.characteristic_rate = std::isfinite(lo) ? lo : 1.0;
  return gen;
}

LindbladGenerator sms(const BasisPtr& basis, const ModelParams& p) {
  p.validate();
  LindbladGenerator gen;
  gen.hamiltonian = {basis, SparseC(basis->size(), basis->size()), "0"};
  if (p.gamma_c > 0) {
    auto l = collective_generator(basis, Pauli::Minus, Pauli::X);
    l.matrix *= std::sqrt(p.gamma_c);
    l.label = "L_d";
    gen.jumps.push_back(std::move(l));
  }
  if (p.w > 0) {
    auto l = collective_generator(basis, Pauli::Plus, Pauli::I);
    l.matrix *= std::sqrt(p.w);
    l.label = "L_r";
    gen.jumps.push_back(std::move(l));
  }
  const double lo = std::min(p.gamma_c > 0 ? p.gamma_c : HUGE_VAL, p.w > 0 ? p.w : HUGE_VAL);
  gen.characteristic_rate = std::isfinite(lo) ? lo : 1.0;
  return gen;
}

CollectiveOperator boat_casimir(const BasisPtr& basis) {
  const auto raise = collective_generator(basis, Pauli::Plus, Pauli::X);
  const auto lower = collective_generator(basis, Pauli::Minus, Pauli::X);
  const auto jz = z_projection(basis, Dof::J);
  const std::array ops{product(raise, lower), product(jz, jz), jz};
  const std::array<Complex, 3> c{1.0, 1.0, -1.0};
  auto e2 = linear_combination(ops, c);
  e2.label = "E^2";
  return e2;
}

StateVector initial_state(InitialState kind, const BasisPtr& basis) {
  const int n = basis->n();
  if (n < 1) throw InvalidArgument("initial_state needs N >= 1");
  CVector amps = CVector::Zero(basis->size());
  if (kind == InitialState::GroundDown) {
    amps(basis->index({0, 0, 0, n})) = 1.0;
  } else {
    // sqrt(C(N, beta)) / 2^(N/2) on (0, beta, 0, N - beta), via lgamma for large N.
    for (int beta = 0; beta <= n; ++beta) {
      const double log_amp = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(beta + 1.0) -
                                    std::lgamma(n - beta + 1.0) - n * std::log(2.0));
      amps(basis->index({0, beta, 0, n - beta})) = std::exp(log_amp);
    }
  }
  return {basis, std::move(amps)};
}

Complex expectation(const CollectiveOperator& a, const StateVector& psi) {
  return psi.amplitudes.dot(a.matrix * psi.amplitudes);
}

Complex expectation(const CollectiveOperator& a, const DensityMatrix& rho) {
  // Tr(rho A) = sum_{ij} rho_ji A_ij
  Complex tr = 0;
  for (int k = 0; k < a.matrix.outerSize(); ++k)
    for (SparseC::InnerIterator it(a.matrix, k); it; ++it)
      tr += rho.entries(it.col(), it.row()) * it.value();
  return tr;
}

}  // namespace su4ent
