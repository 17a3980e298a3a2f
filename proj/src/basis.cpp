#include "su4ent/basis.hpp"

#include <cmath>
#include <string>

#include "su4ent/linalg.hpp"

namespace su4ent {

int& Occupation::operator[](int mode) {
  switch (mode) {
    case 0: return alpha;
    case 1: return beta;
    case 2: return gamma;
    default: return delta;
  }
}

std::int64_t sym_dim(int n) {
  if (n < 0) throw InvalidArgument("sym_dim: negative particle count");
  const std::int64_t m = n;
  return (m + 1) * (m + 2) * (m + 3) / 6;
}

Projections quantum_numbers(const Occupation& s) {
  return {HalfInt::from_twice(s.alpha + s.beta - s.gamma - s.delta),
          HalfInt::from_twice(s.alpha - s.beta + s.gamma - s.delta)};
}

SymBasis::SymBasis(int n) : n_(n) {
  if (n < 0) throw InvalidArgument("SymBasis: negative particle count");
  const auto dim = sym_dim(n);
  states_.reserve(static_cast<std::size_t>(dim));
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  lookup_.assign(side * side * side, -1);
  for (int a = n; a >= 0; --a) {
    for (int b = n - a; b >= 0; --b) {
      for (int c = n - a - b; c >= 0; --c) {
        lookup_[(a * side + b) * side + c] = static_cast<int>(states_.size());
        states_.push_back({a, b, c, n - a - b - c});
      }
    }
  }
  projections_.reserve(states_.size());
  for (const auto& s : states_) projections_.push_back(quantum_numbers(s));
}

int SymBasis::index(const Occupation& s) const {
  if (s.alpha < 0 || s.beta < 0 || s.gamma < 0 || s.delta < 0 || s.total() != n_) return -1;
  const std::size_t side = static_cast<std::size_t>(n_) + 1;
  return lookup_[(s.alpha * side + s.beta) * side + s.gamma];
}

SymBasis enumerate_basis(int n) { return SymBasis(n); }

BasisPtr make_basis(int n) { return std::make_shared<const SymBasis>(n); }

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return {psi.basis, psi.amplitudes * psi.amplitudes.adjoint()};
}

void check_density_matrix(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("density matrix is not square");
  if (hermitian_residual(rho) > tol) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol)
    throw InvalidArgument("density matrix trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (rho.rows() > 0 && es.eigenvalues().minCoeff() < -tol)
    throw InvalidArgument("density matrix has a negative eigenvalue");
}

}  // namespace su4ent
