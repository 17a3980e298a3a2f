#pragma once

#include <vector>

#include "su4ent/basis.hpp"
#include "su4ent/pyramid.hpp"

namespace su4ent {

/// p_{l, m_j, m_k} = <l, m_j, m_k | psi>, one (2l+1) x (2l+1) grid per layer.
/// Layer c has 2l = N - 2c; rows run over m_j = l..-l, columns over m_k = l..-l.
struct CoefficientPyramid {
  int n = 0;
  std::vector<CMatrix> layers;

  double norm_squared() const;
};

/// Reduced per-layer matrices M^(l) of one degree of freedom with their spectra.
struct BlockSpectrum {
  struct Layer {
    HalfInt ell;
    CMatrix block;
    RVector eigenvalues;  // descending
    double log_multiplicity = 0;
  };

  int n = 0;
  Dof dof = Dof::J;
  std::vector<Layer> layers;

  double trace() const;
  /// Each lambda expanded into d copies of lambda/d (small N only).
  std::vector<double> expanded_spectrum() const;
};

struct EntropyReport {
  double time = 0;
  double s_j = 0;
  double s_k = 0;
  double s_total = 0;
  double i_j_given_k = 0;  // S(rho_K) - S(rho)
  double i_k_given_j = 0;  // S(rho_J) - S(rho)
};

CoefficientPyramid project_pure(const StateVector& psi, const PyramidBasis& pyr);

/// M^(l)[m_j, m_j'] = sum_{m_k} p p* for J, with roles swapped for K.
BlockSpectrum blocks_pure(const CoefficientPyramid& p, Dof dof);

/// Diagonalizes already-formed reduced blocks (layer order as in CoefficientPyramid).
BlockSpectrum make_block_spectrum(int n, Dof dof, std::vector<CMatrix> blocks);

/// S = -sum_l sum_i lambda_i ln(lambda_i / d^l_N), with 0 ln 0 = 0.
double entropy_from_blocks(const BlockSpectrum& b);

EntropyReport entropy_pure(const StateVector& psi, const PyramidBasis& pyr);

/// Per-layer reduced blocks of rho for one degree of freedom, formed directly
/// from sector blocks of rho without the full coefficient tensor.
std::vector<CMatrix> project_mixed(const DensityMatrix& rho, const PyramidBasis& pyr, Dof dof);

EntropyReport entropy_mixed(const DensityMatrix& rho, const PyramidBasis& pyr);

/// -Tr rho ln rho by dense Hermitian eigendecomposition.
double von_neumann_entropy(const CMatrix& rho);

}  // namespace su4ent
