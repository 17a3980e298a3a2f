#include "su4ent/oracle.hpp"

#include <cmath>
#include <string>

namespace su4ent::oracle {

namespace {

Eigen::Index full_dim(int n) { return Eigen::Index{1} << (2 * n); }

// Split a full-space index into its J and K configurations (particle 1 slowest).
std::pair<Eigen::Index, Eigen::Index> split(Eigen::Index idx, int n) {
  Eigen::Index j = 0, k = 0;
  for (int p = 0; p < n; ++p) {
    const auto digit = (idx >> (2 * (n - 1 - p))) & 3;
    j = (j << 1) | (digit >> 1);
    k = (k << 1) | (digit & 1);
  }
  return {j, k};
}

Eigen::Index join(Eigen::Index j, Eigen::Index k, int n) {
  Eigen::Index idx = 0;
  for (int p = 0; p < n; ++p) {
    const auto jb = (j >> (n - 1 - p)) & 1;
    const auto kb = (k >> (n - 1 - p)) & 1;
    idx = (idx << 2) | (jb << 1) | kb;
  }
  return idx;
}

}  // namespace

void check_cap(int n) {
  if (n < 0 || n > kMaxParticles)
    throw OracleCapError("oracle refuses N=" + std::to_string(n) + " (cap N <= " +
                         std::to_string(kMaxParticles) + ")");
}

CMatrix embedding(const SymBasis& basis) {
  const int n = basis.n();
  check_cap(n);
  const auto dim = full_dim(n);
  CMatrix p = CMatrix::Zero(dim, basis.size());
  const double log_nfact = std::lgamma(n + 1.0);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Occupation occ;
    for (int q = 0; q < n; ++q) occ[static_cast<int>((idx >> (2 * q)) & 3)] += 1;
    double log_w = -log_nfact;
    for (int m = 0; m < 4; ++m) log_w += std::lgamma(occ[m] + 1.0);
    p(idx, basis.index(occ)) = std::exp(0.5 * log_w);
  }
  return p;
}

CVector embed_symmetric(const StateVector& psi) {
  return embedding(*psi.basis) * psi.amplitudes;
}

CMatrix embed_symmetric(const DensityMatrix& rho) {
  const CMatrix p = embedding(*rho.basis);
  return p * rho.entries * p.adjoint();
}

CMatrix single_site(int n, int site, const Eigen::Matrix4cd& op) {
  check_cap(n);
  CMatrix out = CMatrix::Ones(1, 1);
  for (int p = 0; p < n; ++p) {
    const CMatrix factor = p == site ? CMatrix(op) : CMatrix(CMatrix::Identity(4, 4));
    CMatrix next = CMatrix::Zero(out.rows() * 4, out.cols() * 4);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        if (out(r, c) != Complex(0.0)) next.block(4 * r, 4 * c, 4, 4) = out(r, c) * factor;
    out = std::move(next);
  }
  return out;
}

CMatrix full_generator(int n, Pauli mu, Pauli nu) {
  check_cap(n);
  const Eigen::Matrix4cd one = single_particle(mu, nu);
  CMatrix g = CMatrix::Zero(full_dim(n), full_dim(n));
  for (int site = 0; site < n; ++site) g += single_site(n, site, one);
  return g;
}

CVector product_state(int n, const Eigen::Vector4cd& single) {
  check_cap(n);
  CVector out = CVector::Ones(1);
  for (int p = 0; p < n; ++p) {
    CVector next(out.size() * 4);
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(4 * i, 4) = out(i) * single;
    out = std::move(next);
  }
  return out;
}

CMatrix partial_trace(const CVector& psi, int n, Dof keep) {
  check_cap(n);
  const Eigen::Index half = Eigen::Index{1} << n;
  if (psi.size() != full_dim(n)) throw InvalidArgument("partial_trace: wrong state size");
  CMatrix a(half, half);  // a(j, k) = psi(j, k)
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    const auto [j, k] = split(idx, n);
    a(j, k) = psi(idx);
  }
  if (keep == Dof::J) return a * a.adjoint();
  return a.transpose() * a.conjugate();
}

CMatrix partial_trace(const CMatrix& rho, int n, Dof keep) {
  check_cap(n);
  const Eigen::Index half = Eigen::Index{1} << n;
  if (rho.rows() != full_dim(n)) throw InvalidArgument("partial_trace: wrong matrix size");
  CMatrix out = CMatrix::Zero(half, half);
  for (Eigen::Index a = 0; a < half; ++a)
    for (Eigen::Index b = 0; b < half; ++b)
      for (Eigen::Index t = 0; t < half; ++t) {
        if (keep == Dof::J)
          out(a, b) += rho(join(a, t, n), join(b, t, n));
        else
          out(a, b) += rho(join(t, a, n), join(t, b, n));
      }
  return out;
}

double full_entropy(const CMatrix& reduced) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(reduced, Eigen::EigenvaluesOnly);
  RVector ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-9) throw NumericalError("oracle: negative eigenvalue in reduced state");
  ev = ev.cwiseMax(0.0);
  ev /= ev.sum();
  double s = 0;
  for (double v : ev)
    if (v >= 1e-12) s -= v * std::log(v);
  return std::max(s, 0.0);
}

EntropyReport entropies(const CVector& psi, int n) {
  return entropies(CMatrix(psi * psi.adjoint()), n);
}

EntropyReport entropies(const CMatrix& rho, int n) {
  EntropyReport r;
  r.s_j = full_entropy(partial_trace(rho, n, Dof::J));
  r.s_k = full_entropy(partial_trace(rho, n, Dof::K));
  r.s_total = full_entropy(rho);
  r.i_j_given_k = r.s_k - r.s_total;
  r.i_k_given_j = r.s_j - r.s_total;
  return r;
}

ExactPropagator::ExactPropagator(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  vectors_ = es.eigenvectors();
  energies_ = es.eigenvalues();
}

CVector ExactPropagator::evolve(const CVector& psi0, double t) const {
  CVector c = vectors_.adjoint() * psi0;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-kI * energies_(i) * t);
  return vectors_ * c;
}

std::vector<CMatrix> evolve_lindblad(const CMatrix& h, std::span<const CMatrix> jumps,
                                     const CMatrix& rho0, std::span<const double> times,
                                     const IntegratorOptions& opts) {
  const auto dim = h.rows();
  std::vector<CMatrix> jumps_adj;
  CMatrix h_eff = h;
  for (const auto& l : jumps) {
    jumps_adj.push_back(l.adjoint());
    h_eff -= Complex(0.0, 0.5) * (jumps_adj.back() * l);
  }
  const CMatrix h_eff_adj = h_eff.adjoint();
  auto rhs = [&](const ode::Packed& x, ode::Packed& d, double) {
    const auto rho = ode::as_matrix(x, dim);
    auto out = ode::as_matrix(d, dim);
    out.noalias() = -kI * (h_eff * rho) + kI * (rho * h_eff_adj);
    for (std::size_t k = 0; k < jumps.size(); ++k) out.noalias() += jumps[k] * rho * jumps_adj[k];
  };
  ode::Packed x(2 * rho0.size());
  ode::as_matrix(x, dim) = rho0;
  std::vector<CMatrix> out;
  ode::integrate(rhs, x, times, opts, nullptr,
                 [&](std::size_t, const ode::Packed& s) { out.emplace_back(ode::as_matrix(s, dim)); });
  return out;
}

}  // namespace su4ent::oracle
