#include "su4ent/pyramid.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <fmt/format.h>

#include "su4ent/linalg.hpp"
#include "su4ent/operators.hpp"

namespace su4ent {

namespace {

constexpr char kCacheMagic[8] = {'S', 'U', '4', 'P', 'Y', 'R', 'M', 'D'};
constexpr std::uint32_t kCacheVersion = 1;

void check_layer(int n, HalfInt ell) {
  if (ell.twice < 0 || ell.twice > n || (n - ell.twice) % 2 != 0)
    throw InvalidArgument("invalid layer 2l=" + std::to_string(ell.twice) +
                          " for N=" + std::to_string(n));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::uint64_t>(r);
}

// Analytic sqrt((l+m)(l-m+1)) in doubled units.
double ladder_factor(int two_ell, int two_m) {
  return 0.5 * std::sqrt(static_cast<double>(two_ell + two_m) * (two_ell - two_m + 2));
}

class Builder {
 public:
  Builder(const BasisPtr& basis, const PyramidOptions& opts)
      : basis_(basis), n_(basis->n()), opts_(opts), ladders_(ladder_ops(basis)) {}

  PyramidBasis build() {
    const int side = n_ + 1;
    sectors_.resize(static_cast<std::size_t>(side) * side);
    for (int mj = -n_; mj <= n_; mj += 2)
      for (int mk = -n_; mk <= n_; mk += 2) {
        auto& s = sectors_[id(mj, mk)];
        s.two_mj = mj;
        s.two_mk = mk;
      }
    position_.resize(basis_->size());
    for (int i = 0; i < basis_->size(); ++i) {
      const auto& q = basis_->projections(i);
      auto& s = sectors_[id(q.m_j.twice, q.m_k.twice)];
      position_[i] = static_cast<int>(s.states.size());
      s.states.push_back(i);
    }
    for (auto& s : sectors_) {
      const auto sz = static_cast<Eigen::Index>(s.states.size());
      s.vectors = CMatrix::Zero(sz, sz);
    }

    for (int two_ell = n_; two_ell >= n_ % 2; two_ell -= 2) {
      const int c = (n_ - two_ell) / 2;
      place_corner(two_ell, c);
      for (int mj = two_ell; mj >= -two_ell; mj -= 2) {
        if (mj < two_ell) lower(ladders_.j_minus, two_ell, mj + 2, two_ell, mj, two_ell, c);
        for (int mk = two_ell - 2; mk >= -two_ell; mk -= 2)
          lower(ladders_.k_minus, two_ell, mj, mk + 2, mj, mk, c);
      }
    }
    return PyramidBasis(basis_, std::move(sectors_));
  }

 private:
  int id(int mj, int mk) const { return ((mj + n_) / 2) * (n_ + 1) + (mk + n_) / 2; }

  void place_corner(int two_ell, int c) {
    auto& s = sectors_[id(two_ell, two_ell)];
    if (c == 0) {
      s.vectors(0, 0) = 1.0;
      return;
    }
    const auto sz = static_cast<Eigen::Index>(s.states.size());
    const auto q = s.vectors.leftCols(c);
    CVector best;
    double best_norm = -1;
    for (Eigen::Index i = 0; i < sz; ++i) {
      CVector v = CVector::Unit(sz, i);
      const double r = orthogonalize_against(q, v);
      if (r > best_norm + 1e-12) {
        best_norm = r;
        best = std::move(v);
      }
    }
    if (best_norm < opts_.breakdown_tol)
      throw LogicError("pyramid: Gram-Schmidt breakdown at 2l=" + std::to_string(two_ell));
    best /= best_norm;
    for (Eigen::Index i = 0; i < sz; ++i) {
      if (std::abs(best(i)) > 1e-10) {
        best *= std::conj(best(i)) / std::abs(best(i));
        best(i) = std::abs(best(i));
        break;
      }
    }
    s.vectors.col(c) = best;
  }

  // Apply a lowering operator to column c of sector (from_mj, from_mk) and
  // store the normalized image in column c of sector (to_mj, to_mk).
  void lower(const CollectiveOperator& op, int two_ell, int from_mj, int from_mk, int to_mj,
             int to_mk, int c) {
    const auto& src = sectors_[id(from_mj, from_mk)];
    auto& dst = sectors_[id(to_mj, to_mk)];
    CVector out = CVector::Zero(static_cast<Eigen::Index>(dst.states.size()));
    for (std::size_t i = 0; i < src.states.size(); ++i) {
      const Complex a = src.vectors(static_cast<Eigen::Index>(i), c);
      if (a == Complex(0.0)) continue;
      for (SparseC::InnerIterator it(op.matrix, src.states[i]); it; ++it)
        out(position_[it.row()]) += it.value() * a;
    }
    // Lowering amplifies residual higher-layer components (their ladder
    // factors are larger near m = -l), so project them out again.
    const double raw = out.norm();
    const double norm = orthogonalize_against(dst.vectors.leftCols(c), out);
    const int two_m = from_mj != to_mj ? from_mj : from_mk;
    const double expected = ladder_factor(two_ell, two_m);
    if (std::abs(raw - expected) > opts_.ladder_norm_tol * std::max(1.0, expected) ||
        std::abs(norm - expected) > opts_.ladder_norm_tol * std::max(1.0, expected))
      throw LogicError(fmt::format("pyramid: ladder norm {:.15g} (projected {:.15g}) differs from "
                                   "analytic {:.15g} at 2l={} 2m={}",
                                   raw, norm, expected, two_ell, two_m));
    dst.vectors.col(c) = out / norm;
  }

  BasisPtr basis_;
  int n_;
  PyramidOptions opts_;
  LadderOperators ladders_;
  std::vector<PyramidBasis::Sector> sectors_;
  std::vector<int> position_;
};

}  // namespace

std::uint64_t multiplicity(int n, HalfInt ell) {
  check_layer(n, ell);
  if (n > 62) throw InvalidArgument("multiplicity: N > 62 overflows; use log_multiplicity");
  const int b = (n - ell.twice) / 2;
  return binomial(n, b) - binomial(n, b - 1);
}

double log_multiplicity(int n, HalfInt ell) {
  check_layer(n, ell);
  if (n <= 62) return std::log(static_cast<double>(multiplicity(n, ell)));
  const double a = 0.5 * (n + ell.twice);
  const double b = 0.5 * (n - ell.twice);
  return std::lgamma(n + 1.0) + std::log(ell.twice + 1.0) - std::lgamma(a + 2.0) -
         std::lgamma(b + 1.0);
}

std::vector<HalfInt> layer_values(int n) {
  std::vector<HalfInt> out;
  for (int t = n; t >= n % 2; t -= 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

PyramidBasis::PyramidBasis(BasisPtr basis, std::vector<Sector> sectors)
    : basis_(std::move(basis)), sectors_(std::move(sectors)) {}

int PyramidBasis::sector_id(int two_mj, int two_mk) const {
  const int n = this->n();
  if (std::abs(two_mj) > n || std::abs(two_mk) > n || (n - two_mj) % 2 || (n - two_mk) % 2)
    throw InvalidArgument("no sector (2m_j, 2m_k) = (" + std::to_string(two_mj) + ", " +
                          std::to_string(two_mk) + ")");
  return ((two_mj + n) / 2) * (n + 1) + (two_mk + n) / 2;
}

CVector PyramidBasis::vector(HalfInt ell, HalfInt mj, HalfInt mk) const {
  check_layer(n(), ell);
  if (std::abs(mj.twice) > ell.twice || std::abs(mk.twice) > ell.twice)
    throw InvalidArgument("projection outside layer");
  const auto& s = sector(mj.twice, mk.twice);
  CVector out = CVector::Zero(basis_->size());
  const int c = column(ell);
  for (std::size_t i = 0; i < s.states.size(); ++i)
    out(s.states[i]) = s.vectors(static_cast<Eigen::Index>(i), c);
  return out;
}

CMatrix PyramidBasis::unitary() const {
  const int dim = basis_->size();
  CMatrix u(dim, dim);
  int col = 0;
  for (HalfInt ell : layer_values(n()))
    for (int mj = ell.twice; mj >= -ell.twice; mj -= 2)
      for (int mk = ell.twice; mk >= -ell.twice; mk -= 2)
        u.col(col++) = vector(ell, HalfInt::from_twice(mj), HalfInt::from_twice(mk));
  return u;
}

double PyramidBasis::ladder_normalization(HalfInt ell, HalfInt mj, HalfInt mk) {
  double norm = 1.0;
  for (int m = ell.twice; m > mj.twice; m -= 2) norm *= ladder_factor(ell.twice, m);
  for (int m = ell.twice; m > mk.twice; m -= 2) norm *= ladder_factor(ell.twice, m);
  return norm;
}

PyramidBasis build_pyramid(const BasisPtr& basis, const PyramidOptions& opts) {
  if (!basis) throw InvalidArgument("build_pyramid: null basis");
  return Builder(basis, opts).build();
}

void save_pyramid(const PyramidBasis& pyr, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write pyramid cache " + path.string());
  const std::int32_t n = pyr.n();
  std::uint64_t count = 0;
  for (const auto& s : pyr.sectors()) count += static_cast<std::uint64_t>(s.vectors.size());
  out.write(kCacheMagic, sizeof kCacheMagic);
  out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& s : pyr.sectors())
    out.write(reinterpret_cast<const char*>(s.vectors.data()),
              static_cast<std::streamsize>(s.vectors.size() * sizeof(Complex)));
  if (!out) throw InvalidArgument("failed writing pyramid cache " + path.string());
}

PyramidBasis load_pyramid(const BasisPtr& basis, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read pyramid cache " + path.string());
  char magic[8];
  std::uint32_t version = 0;
  std::int32_t n = -1;
  std::uint64_t count = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
    throw InvalidArgument("pyramid cache " + path.string() + " has a bad header");
  if (version != kCacheVersion)
    throw InvalidArgument("pyramid cache version " + std::to_string(version) + " unsupported");
  if (n != basis->n())
    throw InvalidArgument("pyramid cache is for N=" + std::to_string(n));

  // Sector layout is a function of N alone, so rebuild it from the basis.
  const int side = n + 1;
  std::vector<PyramidBasis::Sector> sectors(static_cast<std::size_t>(side) * side);
  for (int mj = -n; mj <= n; mj += 2)
    for (int mk = -n; mk <= n; mk += 2) {
      auto& s = sectors[((mj + n) / 2) * side + (mk + n) / 2];
      s.two_mj = mj;
      s.two_mk = mk;
    }
  for (int i = 0; i < basis->size(); ++i) {
    const auto& q = basis->projections(i);
    sectors[((q.m_j.twice + n) / 2) * side + (q.m_k.twice + n) / 2].states.push_back(i);
  }
  std::uint64_t expected = 0;
  for (const auto& s : sectors) expected += s.states.size() * s.states.size();
  if (count != expected) throw InvalidArgument("pyramid cache payload size mismatch");
  for (auto& s : sectors) {
    const auto sz = static_cast<Eigen::Index>(s.states.size());
    s.vectors.resize(sz, sz);
    in.read(reinterpret_cast<char*>(s.vectors.data()),
            static_cast<std::streamsize>(s.vectors.size() * sizeof(Complex)));
  }
  if (!in) throw InvalidArgument("pyramid cache " + path.string() + " is truncated");
  return PyramidBasis(basis, std::move(sectors));
}

}  // namespace su4ent
