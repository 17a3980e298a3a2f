#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "su4ent/basis.hpp"

namespace su4ent {

/// d^l_N = N!(2l+1) / ((N/2+l+1)! (N/2-l)!), i.e. C(N, N/2-l) - C(N, N/2-l-1).
/// Exact for N <= 62; throws InvalidArgument for an l outside {N/2, N/2-1, ...}.
std::uint64_t multiplicity(int n, HalfInt ell);

/// ln d^l_N, valid for any N.
double log_multiplicity(int n, HalfInt ell);

/// Layers l = N/2, N/2-1, ..., 0 or 1/2.
std::vector<HalfInt> layer_values(int n);

/// Orthonormal |l, m_j, m_k> basis of the symmetric space.
///
/// Every |l, m_j, m_k> lives in the (m_j, m_k) sector of the occupation basis,
/// so the change of basis is block diagonal. Each sector stores its occupation
/// indices and a unitary whose column c holds the vector with 2l = N - 2c.
class PyramidBasis {
 public:
  struct Sector {
    int two_mj = 0;
    int two_mk = 0;
    std::vector<int> states;  // SymBasis indices, ascending
    CMatrix vectors;          // states.size() x states.size()
  };

  PyramidBasis(BasisPtr basis, std::vector<Sector> sectors);

  int n() const { return basis_->n(); }
  const BasisPtr& basis() const { return basis_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  std::vector<Sector>& mutable_sectors() { return sectors_; }

  int sector_id(int two_mj, int two_mk) const;
  const Sector& sector(int two_mj, int two_mk) const { return sectors_[sector_id(two_mj, two_mk)]; }

  /// Column of layer `ell` inside a sector.
  int column(HalfInt ell) const { return (n() - ell.twice) / 2; }

  /// Full-length coefficient vector of |l, m_j, m_k> in the occupation basis.
  CVector vector(HalfInt ell, HalfInt mj, HalfInt mk) const;

  /// Dense dim x dim unitary, columns ordered by l (desc), m_j (desc), m_k (desc).
  CMatrix unitary() const;

  std::uint64_t multiplicity(HalfInt ell) const { return su4ent::multiplicity(n(), ell); }

  /// Product of analytic ladder norms sqrt((l+m)(l-m+1)) accumulated while
  /// lowering from |l, l, l> to |l, m_j, m_k>.
  static double ladder_normalization(HalfInt ell, HalfInt mj, HalfInt mk);

 private:
  BasisPtr basis_;
  std::vector<Sector> sectors_;
};

struct PyramidOptions {
  /// Minimum Gram-Schmidt residual before declaring breakdown.
  double breakdown_tol = 1e-6;
  /// Allowed deviation of a computed ladder norm from its analytic value.
  double ladder_norm_tol = 1e-10;
};

/// Builds the pyramid with K_- along rows, J_- between rows, and
/// Gram-Schmidt for each lower layer's |l, l, l> corner.
PyramidBasis build_pyramid(const BasisPtr& basis, const PyramidOptions& opts = {});

/// Versioned binary cache of the pyramid vectors.
void save_pyramid(const PyramidBasis& pyr, const std::filesystem::path& path);
PyramidBasis load_pyramid(const BasisPtr& basis, const std::filesystem::path& path);

}  // namespace su4ent
