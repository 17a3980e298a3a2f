#include "su4ent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "su4ent/linalg.hpp"

namespace su4ent {

namespace {

constexpr double kFloor = 1e-12;
constexpr double kClip = 1e-9;

// Clips numerical dust below zero and rescales to unit trace; throws on
// genuinely negative weight. Rescaling unconditionally keeps the result a
// function of the normalized state, so S_J and S_K of one pure state agree
// whether or not either spectrum happened to contain dust.
double sanitize(std::vector<double>& values, double clip) {
  for (double& v : values) {
    if (v < -clip) throw NumericalError("negative eigenvalue " + std::to_string(v) + " in spectrum");
    if (v < 0) v = 0;
  }
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total <= 0) throw NumericalError("spectrum has no positive weight");
  for (double& v : values) v /= total;
  return 1.0 / total;
}

RVector descending_eigenvalues(const CMatrix& block) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(block, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

}  // namespace

double spectrum_entropy(std::vector<double> eigenvalues, double floor, double clip) {
  sanitize(eigenvalues, clip);
  double s = 0;
  for (double v : eigenvalues)
    if (v >= floor) s -= v * std::log(v);
  return s;
}

double CoefficientPyramid::norm_squared() const {
  double s = 0;
  for (const auto& l : layers) s += l.squaredNorm();
  return s;
}

double BlockSpectrum::trace() const {
  double t = 0;
  for (const auto& l : layers) t += l.eigenvalues.sum();
  return t;
}

std::vector<double> BlockSpectrum::expanded_spectrum() const {
  std::vector<double> out;
  for (const auto& l : layers) {
    const auto d = static_cast<std::size_t>(std::llround(std::exp(l.log_multiplicity)));
    for (Eigen::Index i = 0; i < l.eigenvalues.size(); ++i)
      out.insert(out.end(), d, l.eigenvalues(i) / static_cast<double>(d));
  }
  return out;
}

CoefficientPyramid project_pure(const StateVector& psi, const PyramidBasis& pyr) {
  const int n = pyr.n();
  if (psi.amplitudes.size() != pyr.basis()->size())
    throw InvalidArgument("project_pure: state dimension does not match the pyramid");
  CoefficientPyramid p;
  p.n = n;
  for (HalfInt ell : layer_values(n))
    p.layers.push_back(CMatrix::Zero(ell.twice + 1, ell.twice + 1));

  CVector local;
  for (const auto& s : pyr.sectors()) {
    const auto sz = static_cast<Eigen::Index>(s.states.size());
    local.resize(sz);
    for (Eigen::Index i = 0; i < sz; ++i) local(i) = psi.amplitudes(s.states[i]);
    const CVector coeffs = s.vectors.adjoint() * local;
    for (Eigen::Index c = 0; c < sz; ++c) {
      const int two_ell = n - 2 * static_cast<int>(c);
      p.layers[c]((two_ell - s.two_mj) / 2, (two_ell - s.two_mk) / 2) = coeffs(c);
    }
  }
  const double deficit = std::abs(p.norm_squared() - 1.0);
  if (deficit > 1e-8)
    throw InvalidArgument("project_pure: coefficient norm deviates from 1 by " +
                          std::to_string(deficit));
  return p;
}

BlockSpectrum make_block_spectrum(int n, Dof dof, std::vector<CMatrix> blocks) {
  const auto ells = layer_values(n);
  if (blocks.size() != ells.size()) throw InvalidArgument("make_block_spectrum: wrong layer count");
  BlockSpectrum b;
  b.n = n;
  b.dof = dof;
  b.layers.reserve(blocks.size());
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    BlockSpectrum::Layer layer;
    layer.ell = ells[c];
    layer.eigenvalues = descending_eigenvalues(blocks[c]);
    layer.block = std::move(blocks[c]);
    layer.log_multiplicity = log_multiplicity(n, ells[c]);
    b.layers.push_back(std::move(layer));
  }
  return b;
}

BlockSpectrum blocks_pure(const CoefficientPyramid& p, Dof dof) {
  std::vector<CMatrix> blocks;
  blocks.reserve(p.layers.size());
  for (const auto& grid : p.layers) {
    if (dof == Dof::J)
      blocks.push_back(grid * grid.adjoint());
    else
      blocks.push_back(grid.transpose() * grid.conjugate());
  }
  return make_block_spectrum(p.n, dof, std::move(blocks));
}

double entropy_from_blocks(const BlockSpectrum& b) {
  std::vector<double> values;
  std::vector<double> logs;
  for (const auto& l : b.layers)
    for (Eigen::Index i = 0; i < l.eigenvalues.size(); ++i) {
      values.push_back(l.eigenvalues(i));
      logs.push_back(l.log_multiplicity);
    }
  sanitize(values, kClip);
  double s = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= kFloor) s -= values[i] * (std::log(values[i]) - logs[i]);
  return std::max(s, 0.0);
}

EntropyReport entropy_pure(const StateVector& psi, const PyramidBasis& pyr) {
  const auto p = project_pure(psi, pyr);
  EntropyReport r;
  r.s_j = entropy_from_blocks(blocks_pure(p, Dof::J));
  r.s_k = entropy_from_blocks(blocks_pure(p, Dof::K));
  r.s_total = 0;
  r.i_j_given_k = r.s_k;
  r.i_k_given_j = r.s_j;
  return r;
}

std::vector<CMatrix> project_mixed(const DensityMatrix& rho, const PyramidBasis& pyr, Dof dof) {
  const int n = pyr.n();
  const auto dim = pyr.basis()->size();
  if (rho.entries.rows() != dim || rho.entries.cols() != dim)
    throw InvalidArgument("project_mixed: density matrix dimension does not match the pyramid");

  std::vector<CMatrix> blocks;
  for (HalfInt ell : layer_values(n)) blocks.push_back(CMatrix::Zero(ell.twice + 1, ell.twice + 1));

  // For J, pair sectors sharing m_k and differing in m_j; for K the reverse.
  for (int fixed = -n; fixed <= n; fixed += 2) {
    for (int a = -n; a <= n; a += 2) {
      const auto& sa = dof == Dof::J ? pyr.sector(a, fixed) : pyr.sector(fixed, a);
      if (sa.states.empty()) continue;
      for (int b = -n; b <= n; b += 2) {
        const auto& sb = dof == Dof::J ? pyr.sector(b, fixed) : pyr.sector(fixed, b);
        if (sb.states.empty()) continue;
        const CMatrix sub = rho.entries(sa.states, sb.states);
        const CMatrix x = sa.vectors.adjoint() * sub * sb.vectors;
        const auto common = std::min(x.rows(), x.cols());
        for (Eigen::Index c = 0; c < common; ++c) {
          const int two_ell = n - 2 * static_cast<int>(c);
          blocks[c]((two_ell - a) / 2, (two_ell - b) / 2) += x(c, c);
        }
      }
    }
  }
  double tr = 0;
  for (const auto& bl : blocks) tr += bl.trace().real();
  if (std::abs(tr - 1.0) > 1e-8)
    throw InvalidArgument("project_mixed: trace deviates from 1 by " + std::to_string(tr - 1.0));
  return blocks;
}

double von_neumann_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  return std::max(spectrum_entropy(std::vector<double>(ev.data(), ev.data() + ev.size())), 0.0);
}

EntropyReport entropy_mixed(const DensityMatrix& rho, const PyramidBasis& pyr) {
  EntropyReport r;
  r.s_j = entropy_from_blocks(make_block_spectrum(pyr.n(), Dof::J, project_mixed(rho, pyr, Dof::J)));
  r.s_k = entropy_from_blocks(make_block_spectrum(pyr.n(), Dof::K, project_mixed(rho, pyr, Dof::K)));
  r.s_total = von_neumann_entropy(rho.entries);
  r.i_j_given_k = r.s_k - r.s_total;
  r.i_k_given_j = r.s_j - r.s_total;
  return r;
}

}  // namespace su4ent
