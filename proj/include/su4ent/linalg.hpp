#pragma once

// Small Eigen helpers shared by the modules and the tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "su4ent/types.hpp"

namespace su4ent {

/// max |A - A^H| entry.
template <typename Derived>
typename Derived::RealScalar hermitian_residual(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
double hermitian_residual(const Eigen::SparseMatrix<Scalar>& a) {
  Eigen::SparseMatrix<Scalar> d = a - Eigen::SparseMatrix<Scalar>(a.adjoint());
  double r = 0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(d, k); it; ++it)
      r = std::max(r, static_cast<double>(std::abs(it.value())));
  return r;
}

/// max |entry| of a sparse matrix (0 for an empty one).
template <typename Scalar>
double max_abs(const Eigen::SparseMatrix<Scalar>& a) {
  double r = 0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, k); it; ++it)
      r = std::max(r, static_cast<double>(std::abs(it.value())));
  return r;
}

template <typename Scalar>
Eigen::SparseMatrix<Scalar> commutator(const Eigen::SparseMatrix<Scalar>& a,
                                       const Eigen::SparseMatrix<Scalar>& b) {
  Eigen::SparseMatrix<Scalar> ab = a * b;
  Eigen::SparseMatrix<Scalar> ba = b * a;
  return ab - ba;
}

/// Classical Gram-Schmidt applied twice: removes from `v` its components along
/// the (orthonormal) columns of `q`. Returns the residual norm.
template <typename DerivedQ, typename DerivedV>
typename DerivedV::RealScalar orthogonalize_against(const Eigen::MatrixBase<DerivedQ>& q,
                                                    Eigen::MatrixBase<DerivedV>& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (q.cols() == 0) break;
    const auto coeffs = (q.adjoint() * v).eval();
    v -= q * coeffs;
  }
  return v.norm();
}

/// Von Neumann entropy (nats) of a spectrum that should be a probability
/// vector. Eigenvalues below `floor` count as zero; slightly negative values
/// (>= -clip) are clipped, and the spectrum is rescaled to unit trace.
double spectrum_entropy(std::vector<double> eigenvalues, double floor = 1e-12,
                        double clip = 1e-9);

}  // namespace su4ent
