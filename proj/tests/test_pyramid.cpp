#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "su4ent/linalg.hpp"
#include "su4ent/operators.hpp"
#include "su4ent/oracle.hpp"
#include "su4ent/pyramid.hpp"

using namespace su4ent;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

std::filesystem::path temp_path(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("multiplicity") {
  for (int n = 0; n <= 30; ++n) CHECK(multiplicity(n, h(n)) == 1);
  CHECK(multiplicity(3, h(1)) == 2);
  CHECK(multiplicity(4, h(0)) == 2);
  CHECK(multiplicity(4, h(2)) == 3);
  CHECK(multiplicity(60, h(0)) == 3'814'986'502'092'304ULL);  // Catalan(30)
  CHECK_THROWS_AS(multiplicity(4, h(1)), InvalidArgument);
  CHECK_THROWS_AS(multiplicity(4, h(6)), InvalidArgument);
  CHECK_THROWS_AS(multiplicity(4, h(-2)), InvalidArgument);
  CHECK_THROWS_AS(multiplicity(64, h(0)), InvalidArgument);
  for (int n = 1; n <= 40; ++n)
    for (auto ell : layer_values(n))
      CHECK(log_multiplicity(n, ell) ==
            doctest::Approx(std::log(static_cast<double>(multiplicity(n, ell)))).epsilon(1e-12));
  CHECK(std::isfinite(log_multiplicity(400, h(0))));
}

TEST_CASE("layer counting identities for N <= 40") {
  for (int n = 0; n <= 40; ++n) {
    std::int64_t squares = 0;
    unsigned __int128 weighted = 0;
    for (auto ell : layer_values(n)) {
      squares += (ell.twice + 1) * (ell.twice + 1);
      weighted += static_cast<unsigned __int128>(multiplicity(n, ell)) * (ell.twice + 1);
    }
    CHECK(squares == sym_dim(n));
    CHECK(weighted == (static_cast<unsigned __int128>(1) << n));
  }
  CHECK(layer_values(4).size() == 3);
  CHECK(layer_values(3).back() == h(1));
}

TEST_CASE("N=2 splits into a triplet layer and a singlet layer") {
  const auto pyr = build_pyramid(make_basis(2));
  const auto ells = layer_values(2);
  REQUIRE(ells.size() == 2);
  CHECK((ells[0].twice + 1) * (ells[0].twice + 1) == 9);
  CHECK((ells[1].twice + 1) * (ells[1].twice + 1) == 1);
  CHECK(pyr.multiplicity(ells[0]) == 1);
  CHECK(pyr.multiplicity(ells[1]) == 1);
}

TEST_CASE("pyramid invariants for N <= 12") {
  for (int n = 0; n <= 12; ++n) {
    CAPTURE(n);
    const auto basis = make_basis(n);
    const auto pyr = build_pyramid(basis);
    const CMatrix u = pyr.unitary();
    REQUIRE(u.rows() == basis->size());
    REQUIRE(u.cols() == basis->size());
    const auto dim = basis->size();
    CHECK((u.adjoint() * u - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-10);
    const SparseC j2 = casimir(basis, Dof::J).matrix;
    const SparseC k2 = casimir(basis, Dof::K).matrix;
    const SparseC jz = z_projection(basis, Dof::J).matrix;
    const SparseC kz = z_projection(basis, Dof::K).matrix;
    const auto lad = ladder_ops(basis);
    for (auto ell : layer_values(n)) {
      const double l = ell.value();
      for (int mj = -ell.twice; mj <= ell.twice; mj += 2)
        for (int mk = -ell.twice; mk <= ell.twice; mk += 2) {
          const CVector v = pyr.vector(ell, h(mj), h(mk));
          CHECK((j2 * v - l * (l + 1) * v).norm() <= 1e-8);
          CHECK((k2 * v - l * (l + 1) * v).norm() <= 1e-8);
          CHECK((jz * v - 0.5 * mj * v).norm() == 0.0);
          CHECK((kz * v - 0.5 * mk * v).norm() == 0.0);
          if (mk > -ell.twice) {
            const double f = std::sqrt((l + 0.5 * mk) * (l - 0.5 * mk + 1));
            CHECK((lad.k_minus.matrix * v - f * pyr.vector(ell, h(mj), h(mk - 2))).norm() <=
                  1e-10);
          }
          if (mj > -ell.twice) {
            const double f = std::sqrt((l + 0.5 * mj) * (l - 0.5 * mj + 1));
            CHECK((lad.j_minus.matrix * v - f * pyr.vector(ell, h(mj - 2), h(mk))).norm() <=
                  1e-10);
          }
        }
    }
  }
}

TEST_CASE("corner vectors carry a real positive leading coefficient") {
  for (int n : {3, 6, 9}) {
    const auto pyr = build_pyramid(make_basis(n));
    for (auto ell : layer_values(n)) {
      const CVector v = pyr.vector(ell, ell, ell);
      Eigen::Index i = 0;
      while (std::abs(v(i)) <= 1e-10) ++i;
      CHECK(v(i).real() > 0);
      CHECK(v(i).imag() == 0.0);
    }
    const CVector top = pyr.vector(h(n), h(n), h(n));
    CHECK(top(pyr.basis()->index({n, 0, 0, 0})) == Complex(1.0));
  }
}

TEST_CASE("N=3 (3/2, 1/2, 1/2) is the symmetrized single-flip state") {
  const int n = 3;
  const auto basis = make_basis(n);
  const auto pyr = build_pyramid(basis);
  const CVector v = oracle::embed_symmetric(StateVector{basis, pyr.vector(h(3), h(1), h(1))});
  // |1up>^3 lowered once on each degree of freedom, in the full space.
  Eigen::Vector4cd up = Eigen::Vector4cd::Zero();
  up(0) = 1.0;
  const CVector top = oracle::product_state(n, up);
  CVector ref = oracle::full_generator(n, Pauli::I, Pauli::Minus) *
                (oracle::full_generator(n, Pauli::Minus, Pauli::I) * top);
  ref.normalize();
  CHECK(std::abs(std::abs(ref.dot(v)) - 1.0) <= 1e-12);
  CHECK(std::abs(ref.dot(v) - 1.0) <= 1e-12);
}

TEST_CASE("ladder normalization") {
  CHECK(PyramidBasis::ladder_normalization(h(3), h(3), h(3)) == 1.0);
  // sqrt(3) sqrt(4) sqrt(3) for (3/2, 3/2 -> -3/2) on one axis.
  CHECK(PyramidBasis::ladder_normalization(h(3), h(-3), h(3)) ==
        doctest::Approx(6.0).epsilon(1e-14));
  CHECK(PyramidBasis::ladder_normalization(h(2), h(0), h(-2)) ==
        doctest::Approx(std::sqrt(2.0) * 2.0).epsilon(1e-14));
}

TEST_CASE("sector lookup errors") {
  const auto pyr = build_pyramid(make_basis(3));
  CHECK_THROWS_AS(pyr.sector_id(5, 1), InvalidArgument);
  CHECK_THROWS_AS(pyr.vector(h(1), h(3), h(1)), InvalidArgument);
  CHECK_THROWS_AS(build_pyramid(nullptr), InvalidArgument);
}

TEST_CASE("large N stays orthonormal sector by sector") {
  const auto pyr = build_pyramid(make_basis(40));
  double worst = 0;
  for (const auto& s : pyr.sectors()) {
    const auto k = s.vectors.cols();
    worst = std::max(worst, (s.vectors.adjoint() * s.vectors - CMatrix::Identity(k, k))
                                .cwiseAbs()
                                .maxCoeff());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("cache round trip and corruption") {
  const auto basis = make_basis(5);
  const auto pyr = build_pyramid(basis);
  const auto path = temp_path("su4ent_test_pyramid.bin");
  save_pyramid(pyr, path);
  const auto back = load_pyramid(basis, path);
  CHECK((back.unitary() - pyr.unitary()).norm() == 0.0);

  CHECK_THROWS_AS(load_pyramid(make_basis(4), path), InvalidArgument);

  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 8);
  CHECK_THROWS_AS(load_pyramid(basis, path), InvalidArgument);

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "not a cache";
  }
  CHECK_THROWS_AS(load_pyramid(basis, path), InvalidArgument);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_pyramid(basis, path), InvalidArgument);
}
