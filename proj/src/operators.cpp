#include "su4ent/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace su4ent {

namespace {

std::mutex cache_mutex;
std::map<std::tuple<int, Pauli, Pauli>, SparseC> generator_cache;

void require_same_space(const CollectiveOperator& a, const CollectiveOperator& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols() ||
      (a.basis && b.basis && a.basis->n() != b.basis->n()))
    throw InvalidArgument("operator dimension mismatch: " + a.label + " vs " + b.label);
}

SparseC build_generator(const SymBasis& basis, Pauli mu, Pauli nu) {
  const Eigen::Matrix4cd one = single_particle(mu, nu);
  const int dim = basis.size();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * 4);
  for (int col = 0; col < dim; ++col) {
    const Occupation& s = basis.state(col);
    for (int b = 0; b < 4; ++b) {
      if (s[b] == 0) continue;
      for (int a = 0; a < 4; ++a) {
        const Complex w = one(a, b);
        if (w == Complex(0.0)) continue;
        if (a == b) {
          triplets.emplace_back(col, col, w * static_cast<double>(s[a]));
          continue;
        }
        Occupation t = s;
        t[b] -= 1;
        t[a] += 1;
        const double amp = std::sqrt(static_cast<double>(s[b]) * static_cast<double>(s[a] + 1));
        triplets.emplace_back(basis.index(t), col, w * amp);
      }
    }
  }
  SparseC m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(Complex(0.0));
  m.makeCompressed();
  return m;
}

}  // namespace

std::string_view to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "x";
    case Pauli::Y: return "y";
    case Pauli::Z: return "z";
    case Pauli::Plus: return "+";
    case Pauli::Minus: return "-";
  }
  return "?";
}

Pauli parse_pauli(std::string_view s) {
  if (s == "I") return Pauli::I;
  if (s == "x") return Pauli::X;
  if (s == "y") return Pauli::Y;
  if (s == "z") return Pauli::Z;
  if (s == "+") return Pauli::Plus;
  if (s == "-") return Pauli::Minus;
  throw InvalidArgument("unknown operator label '" + std::string(s) + "'");
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    case Pauli::Plus: m << 0, 1, 0, 0; break;
    case Pauli::Minus: m << 0, 0, 1, 0; break;
    default: throw InvalidArgument("invalid operator label");
  }
  return m;
}

Eigen::Matrix4cd single_particle(Pauli mu, Pauli nu) {
  const Eigen::Matrix2cd a = pauli_matrix(mu);
  const Eigen::Matrix2cd b = pauli_matrix(nu);
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

CollectiveOperator CollectiveOperator::adjoint() const {
  return {basis, SparseC(matrix.adjoint()), "(" + label + ")^dag"};
}

CollectiveOperator collective_generator(const BasisPtr& basis, Pauli mu, Pauli nu) {
  if (!basis) throw InvalidArgument("collective_generator: null basis");
  const auto key = std::make_tuple(basis->n(), mu, nu);
  std::string label = "G_" + std::string(to_string(mu)) + std::string(to_string(nu));
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = generator_cache.find(key); it != generator_cache.end())
      return {basis, it->second, std::move(label)};
  }
  SparseC m = build_generator(*basis, mu, nu);
  std::lock_guard lock(cache_mutex);
  auto [it, inserted] = generator_cache.emplace(key, std::move(m));
  return {basis, it->second, std::move(label)};
}

LadderOperators ladder_ops(const BasisPtr& basis) {
  return {collective_generator(basis, Pauli::Plus, Pauli::I),
          collective_generator(basis, Pauli::Minus, Pauli::I),
          collective_generator(basis, Pauli::I, Pauli::Plus),
          collective_generator(basis, Pauli::I, Pauli::Minus)};
}

CollectiveOperator z_projection(const BasisPtr& basis, Dof dof) {
  auto g = dof == Dof::J ? collective_generator(basis, Pauli::Z, Pauli::I)
                         : collective_generator(basis, Pauli::I, Pauli::Z);
  g.matrix *= 0.5;
  g.label = dof == Dof::J ? "J_z" : "K_z";
  return g;
}

CollectiveOperator casimir(const BasisPtr& basis, Dof dof) {
  SparseC total(basis->size(), basis->size());
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const auto g = dof == Dof::J ? collective_generator(basis, p, Pauli::I)
                                 : collective_generator(basis, Pauli::I, p);
    SparseC sq = g.matrix * g.matrix;
    total += 0.25 * sq;
  }
  total.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > 1e-14; });
  return {basis, std::move(total), dof == Dof::J ? "J^2" : "K^2"};
}

CollectiveOperator linear_combination(std::span<const CollectiveOperator> ops,
                                      std::span<const Complex> coefficients) {
  if (ops.empty()) throw InvalidArgument("linear_combination: no operators");
  if (ops.size() != coefficients.size())
    throw InvalidArgument("linear_combination: coefficient count mismatch");
  SparseC total(ops[0].matrix.rows(), ops[0].matrix.cols());
  std::string label;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    require_same_space(ops[0], ops[i]);
    total += coefficients[i] * ops[i].matrix;
    if (i) label += " + ";
    label += "c" + std::to_string(i) + "*" + ops[i].label;
  }
  total.prune(Complex(0.0));
  return {ops[0].basis, std::move(total), label};
}

CollectiveOperator product(const CollectiveOperator& a, const CollectiveOperator& b) {
  require_same_space(a, b);
  SparseC m = a.matrix * b.matrix;
  m.prune(Complex(0.0));
  return {a.basis, std::move(m), a.label + "*" + b.label};
}

CollectiveOperator identity(const BasisPtr& basis) {
  SparseC m(basis->size(), basis->size());
  m.setIdentity();
  return {basis, std::move(m), "I"};
}

void clear_operator_cache() {
  std::lock_guard lock(cache_mutex);
  generator_cache.clear();
}

}  // namespace su4ent
