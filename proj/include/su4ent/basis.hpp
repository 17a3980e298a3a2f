#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "su4ent/types.hpp"

namespace su4ent {

/// Occupations of the four single-particle levels, in mode order
/// (1,up) (1,down) (0,up) (0,down): alpha, beta, gamma, delta.
struct Occupation {
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
  int delta = 0;

  int total() const { return alpha + beta + gamma + delta; }
  int operator[](int mode) const { return std::array<int, 4>{alpha, beta, gamma, delta}[mode]; }
  int& operator[](int mode);
  friend bool operator==(const Occupation&, const Occupation&) = default;
};

/// Doubled projections (2 m_j, 2 m_k) of an occupation state.
struct Projections {
  HalfInt m_j;
  HalfInt m_k;
  friend bool operator==(const Projections&, const Projections&) = default;
};

/// (N+1)(N+2)(N+3)/6.
std::int64_t sym_dim(int n);

Projections quantum_numbers(const Occupation& s);

/// Permutation-symmetric basis |alpha,beta,gamma,delta> of N particles,
/// ordered lexicographically descending on (alpha, beta, gamma).
class SymBasis {
 public:
  explicit SymBasis(int n);

  int n() const { return n_; }
  int size() const { return static_cast<int>(states_.size()); }
  const Occupation& state(int i) const { return states_[i]; }
  const std::vector<Occupation>& states() const { return states_; }

  /// Position of `s`, or -1 if `s` is not an N-particle occupation.
  int index(const Occupation& s) const;

  const Projections& projections(int i) const { return projections_[i]; }

 private:
  int n_;
  std::vector<Occupation> states_;
  std::vector<Projections> projections_;
  std::vector<int> lookup_;  // (alpha, beta, gamma) -> index, dense (N+1)^3 table
};

using BasisPtr = std::shared_ptr<const SymBasis>;

SymBasis enumerate_basis(int n);
BasisPtr make_basis(int n);

/// State vector aligned with a SymBasis.
struct StateVector {
  BasisPtr basis;
  CVector amplitudes;
};

/// Density matrix aligned with a SymBasis.
struct DensityMatrix {
  BasisPtr basis;
  CMatrix entries;

  static DensityMatrix pure(const StateVector& psi);
};

/// Throws InvalidArgument unless `rho` is Hermitian, unit trace and PSD within `tol`.
void check_density_matrix(const CMatrix& rho, double tol = 1e-10);

}  // namespace su4ent
