#include "su4ent/validation.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "su4ent/basis.hpp"
#include "su4ent/dynamics.hpp"
#include "su4ent/entropy.hpp"
#include "su4ent/linalg.hpp"
#include "su4ent/models.hpp"
#include "su4ent/operators.hpp"
#include "su4ent/oracle.hpp"
#include "su4ent/pyramid.hpp"

namespace su4ent {

namespace {

constexpr Pauli kLabels[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z, Pauli::Plus, Pauli::Minus};
constexpr int kOracleMaxN = 4;

class Recorder {
 public:
  explicit Recorder(ValidationReport& r) : report_(r) {}

  void check(std::string suite, std::string name, double residual, double tol) {
    const bool ok = std::isfinite(residual) && residual <= tol;
    report_.checks.push_back({std::move(suite), std::move(name), ok, residual, tol});
  }

  // Runs `body` and records a failing check if it throws.
  template <typename F>
  void guard(const std::string& suite, const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report_.checks.push_back({suite, name + " [" + e.what() + "]", false, NAN, 0});
    }
  }

  void note(std::string s) { report_.notes.push_back(std::move(s)); }

 private:
  ValidationReport& report_;
};

double max_abs(const CMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

CVector random_state(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  CVector v(dim);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v / v.norm();
}

CMatrix random_density(std::mt19937_64& rng, Eigen::Index dim, int rank) {
  CMatrix a(dim, rank);
  for (int r = 0; r < rank; ++r) a.col(r) = random_state(rng, dim);
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

double report_distance(const EntropyReport& a, const EntropyReport& b) {
  double d = 0;
  for (double x : {a.s_j - b.s_j, a.s_k - b.s_k, a.s_total - b.s_total,
                   a.i_j_given_k - b.i_j_given_k, a.i_k_given_j - b.i_k_given_j})
    d = std::max(d, std::abs(x));
  return d;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

void basis_suite(Recorder& rec, int n_max) {
  double count_err = 0;
  for (int n = 0; n <= std::max(n_max, 30); ++n)
    count_err = std::max<double>(count_err, std::abs(enumerate_basis(n).size() - sym_dim(n)));
  rec.check("basis", "size equals (N+1)(N+2)(N+3)/6 for N<=30", count_err, 0);

  double roundtrip = 0, layering = 0;
  for (int n = 0; n <= n_max; ++n) {
    const SymBasis b(n);
    std::map<std::pair<int, int>, int> seen;
    for (int i = 0; i < b.size(); ++i) {
      if (b.index(b.state(i)) != i || b.state(i).total() != n) roundtrip += 1;
      const auto q = b.projections(i);
      seen[{q.m_j.twice, q.m_k.twice}] += 1;
    }
    // Layer counting: (m_j, m_k) appears once per layer with l >= max(|m_j|, |m_k|).
    for (const auto& [key, cnt] : seen) {
      const int top = std::max(std::abs(key.first), std::abs(key.second));
      if (cnt != (n - top) / 2 + 1) layering += 1;
    }
  }
  rec.check("basis", "index round trip", roundtrip, 0);
  rec.check("basis", "(m_j,m_k) multiset matches layers", layering, 0);
}

void operators_suite(Recorder& rec, int n_max) {
  double herm = 0, pairing = 0, ladder = 0, casimirs = 0, gii = 0;
  for (int n = 1; n <= n_max; ++n) {
    const auto b = make_basis(n);
    for (auto mu : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z})
      for (auto nu : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z})
        herm = std::max(herm, hermitian_residual(collective_generator(b, mu, nu).matrix));
    for (auto other : kLabels) {
      const SparseC d1 = collective_generator(b, Pauli::Plus, other).matrix -
                         SparseC(collective_generator(b, Pauli::Minus, other).adjoint().matrix);
      const SparseC d2 = collective_generator(b, other, Pauli::Plus).matrix -
                         SparseC(collective_generator(b, other, Pauli::Minus).adjoint().matrix);
      if (other != Pauli::Plus && other != Pauli::Minus)
        pairing = std::max({pairing, su4ent::max_abs(d1), su4ent::max_abs(d2)});
    }
    const auto l = ladder_ops(b);
    for (auto dof : {Dof::J, Dof::K}) {
      const auto z = z_projection(b, dof).matrix;
      const auto& up = dof == Dof::J ? l.j_plus.matrix : l.k_plus.matrix;
      const auto& dn = dof == Dof::J ? l.j_minus.matrix : l.k_minus.matrix;
      ladder = std::max(ladder, su4ent::max_abs(SparseC(commutator(z, up) - up)));
      ladder = std::max(ladder, su4ent::max_abs(SparseC(commutator(z, dn) + dn)));
    }
    casimirs = std::max(casimirs, su4ent::max_abs(commutator(casimir(b, Dof::J).matrix,
                                                             casimir(b, Dof::K).matrix)));
    const SparseC id_n = collective_generator(b, Pauli::I, Pauli::I).matrix -
                         Complex(n) * identity(b).matrix;
    gii = std::max(gii, su4ent::max_abs(id_n));
  }
  rec.check("operators", "Hermitian generators", herm, 1e-12);
  rec.check("operators", "G_(+)nu = G_(-)nu^dagger (both slots)", pairing, 1e-12);
  rec.check("operators", "[J_z,J_pm] = pm J_pm and [K_z,K_pm] = pm K_pm", ladder, 1e-12);
  rec.check("operators", "[J^2, K^2] = 0", casimirs, 1e-12);
  rec.check("operators", "G_II = N * identity", gii, 1e-12);
}

void pyramid_suite(Recorder& rec, int n_max, const ValidationOptions& opts) {
  double counting = 0, gram = 0, cas = 0, ladder = 0, zproj = 0;
  for (int n = 1; n <= n_max; ++n) {
    std::int64_t layers = 0, irreps = 0;
    for (auto ell : layer_values(n)) {
      const std::int64_t w = ell.twice + 1;
      layers += w * w;
      irreps += static_cast<std::int64_t>(multiplicity(n, ell)) * w;
    }
    counting += std::abs(layers - sym_dim(n)) + std::abs(irreps - (std::int64_t{1} << n));

    const auto b = make_basis(n);
    const auto pyr = build_pyramid(b);
    const CMatrix u = pyr.unitary();
    gram = std::max(gram, max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()))));

    const auto j2 = casimir(b, Dof::J).matrix;
    const auto k2 = casimir(b, Dof::K).matrix;
    const auto jz = z_projection(b, Dof::J).matrix;
    const auto kz = z_projection(b, Dof::K).matrix;
    const auto lo = ladder_ops(b);
    for (auto ell : layer_values(n)) {
      const double l = ell.value();
      for (int tj = ell.twice; tj >= -ell.twice; tj -= 2)
        for (int tk = ell.twice; tk >= -ell.twice; tk -= 2) {
          const auto mj = HalfInt::from_twice(tj), mk = HalfInt::from_twice(tk);
          const CVector v = pyr.vector(ell, mj, mk);
          cas = std::max(cas, (j2 * v - l * (l + 1) * v).cwiseAbs().maxCoeff());
          cas = std::max(cas, (k2 * v - l * (l + 1) * v).cwiseAbs().maxCoeff());
          zproj = std::max(zproj, (jz * v - mj.value() * v).cwiseAbs().maxCoeff());
          zproj = std::max(zproj, (kz * v - mk.value() * v).cwiseAbs().maxCoeff());
          if (tk > -ell.twice) {
            const double norm = std::sqrt((l + mk.value()) * (l - mk.value() + 1));
            const CVector next = pyr.vector(ell, mj, HalfInt::from_twice(tk - 2));
            ladder = std::max(ladder, (lo.k_minus.matrix * v - norm * next).cwiseAbs().maxCoeff());
          }
          if (tj > -ell.twice) {
            const double norm = std::sqrt((l + mj.value()) * (l - mj.value() + 1));
            const CVector next = pyr.vector(ell, HalfInt::from_twice(tj - 2), mk);
            ladder = std::max(ladder, (lo.j_minus.matrix * v - norm * next).cwiseAbs().maxCoeff());
          }
        }
    }
  }
  rec.check("pyramid", "sum (2l+1)^2 = dim and sum d(2l+1) = 2^N", counting, 0);
  rec.check("pyramid", "Gram matrix deviation (completeness)", gram, 1e-10);
  rec.check("pyramid", "J^2 and K^2 eigenvalue residual", cas, 1e-8);
  rec.check("pyramid", "J_z and K_z eigenvalue residual", zproj, 1e-12);
  rec.check("pyramid", "K_- and J_- ladder consistency", ladder, 1e-10);

  // Binary cache round trip, optionally with a corrupted payload.
  const int n = std::max(1, n_max);
  rec.guard("pyramid", "cache round trip", [&] {
    const auto b = make_basis(n);
    const auto path = opts.pyramid_cache.value_or(std::filesystem::temp_directory_path() /
                                                  fmt::format("su4ent_validate_{}.pyr", n));
    save_pyramid(build_pyramid(b), path);
    if (opts.inject_cache_fault) {
      std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(0, std::ios::end);
      const auto size = static_cast<std::streamoff>(f.tellp());
      const double junk[2] = {0.5, -0.25};
      f.seekp(size - static_cast<std::streamoff>(sizeof junk));
      f.write(reinterpret_cast<const char*>(junk), sizeof junk);
      rec.note("fault injected into pyramid cache " + path.string());
    }
    const auto loaded = load_pyramid(b, path);
    const CMatrix u = loaded.unitary();
    rec.check("pyramid", fmt::format("cache reload orthonormality N={}", n),
              max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()))), 1e-10);
    if (!opts.pyramid_cache) std::filesystem::remove(path);
  });
}

void entropy_suite(Recorder& rec, int n_max, std::mt19937_64& rng) {
  if (n_max >= 3) {
    const auto pyr = build_pyramid(make_basis(3));
    const HalfInt h = HalfInt::from_twice(1);
    const StateVector psi{pyr.basis(), pyr.vector(h, h, h)};
    rec.check("entropy", "N=3 one-hot (1/2,1/2,1/2) gives ln 2",
              std::abs(entropy_pure(psi, pyr).s_j - std::numbers::ln2), 1e-12);
  }
  double top = 0, sym = 0, bound = 0, accounting = 0, mixed_pure = 0, invariance = 0;
  for (int n = 1; n <= n_max; ++n) {
    const auto b = make_basis(n);
    const auto pyr = build_pyramid(b);
    const HalfInt ell = HalfInt::from_twice(n);
    for (int tj = n; tj >= -n; tj -= 2)
      for (int tk = n; tk >= -n; tk -= 2) {
        const StateVector psi{b, pyr.vector(ell, HalfInt::from_twice(tj), HalfInt::from_twice(tk))};
        top = std::max(top, entropy_pure(psi, pyr).s_j);
      }
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector psi{b, random_state(rng, b->size())};
      const auto rep = entropy_pure(psi, pyr);
      sym = std::max(sym, std::abs(rep.s_j - rep.s_k));
      bound = std::max(bound, std::max(rep.s_j, rep.s_k) - n * std::numbers::ln2);
      const auto p = project_pure(psi, pyr);
      for (auto dof : {Dof::J, Dof::K}) {
        const auto spec = blocks_pure(p, dof);
        if (n <= 12) {
          const auto expanded = spec.expanded_spectrum();
          double total = 0;
          for (double x : expanded) total += x;
          accounting = std::max({accounting, std::abs(total - 1),
                                 std::abs(spectrum_entropy(expanded) - entropy_from_blocks(spec))});
        }
        const auto mixed = project_mixed(DensityMatrix::pure(psi), pyr, dof);
        for (std::size_t c = 0; c < mixed.size(); ++c)
          mixed_pure = std::max(mixed_pure, max_abs(CMatrix(mixed[c] - spec.layers[c].block)));
      }
    }
    const CMatrix rho = random_density(rng, b->size(), 3);
    const CMatrix u = pyr.unitary();
    invariance = std::max(invariance, std::abs(von_neumann_entropy(rho) -
                                               von_neumann_entropy(u.adjoint() * rho * u)));
  }
  rec.check("entropy", "l=N/2 one-hot states give 0", top, 1e-12);
  rec.check("entropy", "pure-state |S_J - S_K|", sym, 1e-9);
  rec.check("entropy", "S <= N ln 2", std::max(bound, 0.0), 1e-9);
  rec.check("entropy", "multiplicity-expanded spectrum sums to 1, Shannon = block entropy",
            accounting, 1e-9);
  rec.check("entropy", "project_mixed(|psi><psi|) = blocks_pure", mixed_pure, 1e-12);
  rec.check("entropy", "S_total invariant under pyramid change of basis", invariance, 1e-10);
}

void dynamics_suite(Recorder& rec, int n_max) {
  const int n = std::max(1, std::min(n_max, 6));
  const auto b = make_basis(n);
  IntegratorOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-12;
  const auto times = linspace(0, 1.5, 16);

  ModelParams p;
  p.n = n;
  p.chi = 1;
  p.gamma_c = 0.5;
  const auto h = h_boat(b, p);
  rec.check("models", "H_IE and H_BOAT Hermitian",
            std::max(hermitian_residual(h.matrix), hermitian_residual(h_illustrative(b, p).matrix)),
            1e-12);

  const auto psi0 = initial_state(InitialState::SuperpositionDown, b);
  const auto pure = evolve_schrodinger(h, psi0, times, tight);
  double norm = 0, energy = 0;
  const double e0 = expectation(h, psi0).real();
  for (const auto& s : pure.states) {
    norm = std::max(norm, std::abs(s.amplitudes.norm() - 1));
    energy = std::max(energy, std::abs(expectation(h, s).real() - e0));
  }
  rec.check("dynamics", fmt::format("Schrodinger norm drift N={}", n), norm, 1e-8);
  rec.check("dynamics", fmt::format("Schrodinger energy drift N={}", n), energy, 1e-8);

  LindbladGenerator closed;
  closed.hamiltonian = h;
  const auto lin = evolve_lindblad(closed, DensityMatrix::pure(psi0), times, tight);
  double agree = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const CVector& v = pure.states[i].amplitudes;
    agree = std::max(agree, max_abs(CMatrix(lin.states[i].entries - v * v.adjoint())));
  }
  rec.check("dynamics", "Lindblad without jumps = Schrodinger", agree, 1e-9);

  const auto gen = leaky_boat(b, p);
  const auto e2 = boat_casimir(b);
  const auto rho0 = DensityMatrix::pure(psi0);
  const auto leaky = evolve_lindblad(gen, rho0, times, tight);
  double trace = 0, herm = 0, conserved = 0;
  const double e2_0 = expectation(e2, rho0).real();
  for (const auto& r : leaky.states) {
    trace = std::max(trace, std::abs(r.entries.trace() - Complex(1.0)));
    herm = std::max(herm, hermitian_residual(r.entries));
    conserved = std::max(conserved, std::abs(expectation(e2, r).real() - e2_0));
  }
  rec.check("dynamics", "leaky BOAT trace preservation", trace, 1e-8);
  rec.check("dynamics", "leaky BOAT Hermiticity", herm, 1e-10);
  rec.check("dynamics", "leaky BOAT <E^2> conserved", conserved, 1e-7);
  rec.check("models", "[E^2, H_BOAT] = 0 and [E^2, L_d] = 0",
            std::max(su4ent::max_abs(commutator(e2.matrix, h.matrix)),
                     su4ent::max_abs(commutator(e2.matrix, gen.jumps[0].matrix))),
            1e-12);

  const auto pyr = build_pyramid(b);
  ModelParams ie;
  ie.n = n;
  const auto ground = initial_state(InitialState::GroundDown, b);
  const auto ie_times = linspace(0, 2 * std::numbers::pi, 41);
  const auto ie_traj = evolve_schrodinger(h_illustrative(b, ie), ground, ie_times, tight);
  double analytic = 0;
  for (std::size_t i = 0; i < ie_times.size(); ++i)
    analytic = std::max(analytic, std::abs(entropy_pure(ie_traj.states[i], pyr).s_j -
                                           analytic_entropy_ie(ie, ie_times[i])));
  rec.check("models", fmt::format("illustrative S_J matches analytic curve N={}", n), analytic,
            1e-6);
}

void oracle_suite(Recorder& rec, int n_max, std::mt19937_64& rng) {
  const int top = std::min(n_max, kOracleMaxN);
  double iso = 0, intertwine = 0, pure_err = 0, mixed_err = 0;
  for (int n = 1; n <= top; ++n) {
    const auto b = make_basis(n);
    const CMatrix p = oracle::embedding(*b);
    iso = std::max(iso, max_abs(CMatrix(p.adjoint() * p - CMatrix::Identity(b->size(), b->size()))));
    for (auto mu : kLabels)
      for (auto nu : kLabels) {
        const CMatrix full = oracle::full_generator(n, mu, nu);
        const CMatrix sym = collective_generator(b, mu, nu).matrix;
        intertwine = std::max(intertwine, max_abs(CMatrix(full * p - p * sym)));
      }
    if (n < 3) continue;
    const auto pyr = build_pyramid(b);
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector psi{b, random_state(rng, b->size())};
      pure_err = std::max(pure_err, report_distance(entropy_pure(psi, pyr),
                                                    oracle::entropies(oracle::embed_symmetric(psi), n)));
    }
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho{b, random_density(rng, b->size(), 1 + trial % 4)};
      mixed_err = std::max(mixed_err, report_distance(entropy_mixed(rho, pyr),
                                                      oracle::entropies(oracle::embed_symmetric(rho), n)));
    }
  }
  rec.check("oracle", "embedding isometry", iso, 1e-12);
  rec.check("oracle", "full_generator P = P collective_generator (36 labels)", intertwine, 1e-12);
  if (top >= 3) {
    rec.check("oracle", "pure-state entropies vs 4^N oracle (Haar-random)", pure_err, 1e-8);
    rec.check("oracle", "mixed-state entropies vs 4^N oracle (random rank 1-4)", mixed_err, 1e-8);

    // Leaky BOAT density matrices against a dense 4^N Lindblad integration.
    const int n = 3;
    const auto b = make_basis(n);
    ModelParams mp;
    mp.n = n;
    mp.gamma_c = 0.25;
    IntegratorOptions tight;
    tight.abs_tol = tight.rel_tol = 1e-12;
    const auto times = linspace(0, 1.0, 6);
    const auto sym = evolve_lindblad(leaky_boat(b, mp),
                                     DensityMatrix::pure(initial_state(InitialState::SuperpositionDown, b)),
                                     times, tight);
    const CMatrix hf = oracle::full_generator(n, Pauli::Plus, Pauli::X) *
                       oracle::full_generator(n, Pauli::Minus, Pauli::X);
    const CMatrix jumps[1] = {std::sqrt(mp.gamma_c) * oracle::full_generator(n, Pauli::Minus, Pauli::X)};
    Eigen::Vector4cd start = Eigen::Vector4cd::Zero();
    start(1) = start(3) = 1 / std::numbers::sqrt2;
    const CVector psi0 = oracle::product_state(n, start);
    const auto full = oracle::evolve_lindblad(hf, jumps, psi0 * psi0.adjoint(), times, tight);
    double err = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      err = std::max(err, max_abs(CMatrix(oracle::embed_symmetric(sym.states[i]) - full[i])));
    rec.check("oracle", "leaky BOAT N=3 density matrices vs 4^N Lindblad", err, 1e-8);
  }
}

}  // namespace

bool ValidationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

ValidationReport run_validation(const ValidationOptions& opts) {
  if (opts.n_max < 1) throw InvalidArgument("validate needs N_max >= 1");
  ValidationReport report;
  Recorder rec(report);
  std::mt19937_64 rng(opts.seed);

  rec.guard("basis", "suite", [&] { basis_suite(rec, opts.n_max); });
  rec.guard("operators", "suite", [&] { operators_suite(rec, opts.n_max); });
  rec.guard("pyramid", "suite", [&] { pyramid_suite(rec, opts.n_max, opts); });
  rec.guard("entropy", "suite", [&] { entropy_suite(rec, opts.n_max, rng); });
  rec.guard("dynamics", "suite", [&] { dynamics_suite(rec, opts.n_max); });
  if (opts.n_max > oracle::kMaxParticles) {
    rec.note(fmt::format("oracle checks refused: N_max={} exceeds the oracle cap N <= {}",
                         opts.n_max, oracle::kMaxParticles));
  } else {
    rec.guard("oracle", "suite", [&] { oracle_suite(rec, opts.n_max, rng); });
  }
  return report;
}

void print_report(std::ostream& os, const ValidationReport& r) {
  for (const auto& n : r.notes) fmt::print(os, "NOTE  {}\n", n);
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    failed += !c.passed;
    fmt::print(os, "{}  {:<10} {:<70} residual={:.3e} tol={:.0e}\n", c.passed ? "PASS" : "FAIL",
               c.suite, c.name, c.residual, c.tolerance);
  }
  fmt::print(os, "{} checks, {} failed\n", r.checks.size(), failed);
}

}  // namespace su4ent
