#include <doctest.h>

#include <map>
#include <set>

#include "su4ent/basis.hpp"
#include "su4ent/pyramid.hpp"

using namespace su4ent;

TEST_CASE("sym_dim closed form") {
  CHECK(sym_dim(0) == 1);
  CHECK(sym_dim(2) == 10);
  CHECK(sym_dim(20) == 1771);
  CHECK(sym_dim(40) == 12341);
  CHECK_THROWS_AS(sym_dim(-1), InvalidArgument);
}

TEST_CASE("enumerate_basis small cases") {
  const auto b1 = enumerate_basis(1);
  REQUIRE(b1.size() == 4);
  CHECK(b1.state(0) == Occupation{1, 0, 0, 0});
  CHECK(b1.state(1) == Occupation{0, 1, 0, 0});
  CHECK(b1.state(2) == Occupation{0, 0, 1, 0});
  CHECK(b1.state(3) == Occupation{0, 0, 0, 1});
  CHECK(enumerate_basis(2).size() == 10);
  CHECK(enumerate_basis(3).size() == 20);
  CHECK(enumerate_basis(0).size() == 1);
  CHECK_THROWS_AS(SymBasis(-2), InvalidArgument);
}

TEST_CASE("ordering is lexicographic descending on (alpha, beta, gamma)") {
  const auto b = enumerate_basis(5);
  for (int i = 1; i < b.size(); ++i) {
    const auto& p = b.state(i - 1);
    const auto& q = b.state(i);
    CHECK(std::tuple(p.alpha, p.beta, p.gamma) > std::tuple(q.alpha, q.beta, q.gamma));
  }
}

TEST_CASE("quantum_numbers") {
  for (int n : {1, 2, 5}) {
    auto q = quantum_numbers({n, 0, 0, 0});
    CHECK(q.m_j.twice == n);
    CHECK(q.m_k.twice == n);
    q = quantum_numbers({0, 0, 0, n});
    CHECK(q.m_j.twice == -n);
    CHECK(q.m_k.twice == -n);
  }
  const auto q = quantum_numbers({2, 1, 0, 1});
  CHECK(q.m_j == HalfInt::from_twice(2));
  CHECK(q.m_k == HalfInt::from_twice(0));
}

TEST_CASE("index round trip and count for N <= 30") {
  for (int n = 0; n <= 30; ++n) {
    const SymBasis b(n);
    REQUIRE(b.size() == sym_dim(n));
    for (int i = 0; i < b.size(); ++i) {
      CHECK(b.state(i).total() == n);
      REQUIRE(b.index(b.state(i)) == i);
    }
  }
  const SymBasis b(3);
  CHECK(b.index({1, 1, 1, 1}) == -1);
  CHECK(b.index({4, 0, 0, -1}) == -1);
}

TEST_CASE("projection multiset matches the layer decomposition") {
  for (int n = 0; n <= 12; ++n) {
    const SymBasis b(n);
    std::map<std::pair<int, int>, int> from_basis, from_layers;
    for (int i = 0; i < b.size(); ++i)
      ++from_basis[{b.projections(i).m_j.twice, b.projections(i).m_k.twice}];
    for (auto ell : layer_values(n))
      for (int mj = -ell.twice; mj <= ell.twice; mj += 2)
        for (int mk = -ell.twice; mk <= ell.twice; mk += 2) ++from_layers[{mj, mk}];
    CHECK(from_basis == from_layers);
  }
}

TEST_CASE("density matrix validation") {
  const auto basis = make_basis(2);
  StateVector psi{basis, CVector::Zero(basis->size())};
  psi.amplitudes(0) = 1.0;
  const auto rho = DensityMatrix::pure(psi);
  CHECK_NOTHROW(check_density_matrix(rho.entries));
  CMatrix bad = rho.entries;
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(check_density_matrix(bad), InvalidArgument);
  CHECK_THROWS_AS(check_density_matrix(2.0 * rho.entries), InvalidArgument);
  CMatrix neg = CMatrix::Zero(basis->size(), basis->size());
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(check_density_matrix(neg), InvalidArgument);
  CHECK_THROWS_AS(check_density_matrix(CMatrix::Zero(2, 3)), InvalidArgument);
}
