// Acceptance criteria 1-10. One PASS/FAIL line per criterion; tolerances are
// fixed here. Usage: su4ent_acceptance [path-to-su4ent-cli]

#include <sys/resource.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "su4ent/dynamics.hpp"
#include "su4ent/entropy.hpp"
#include "su4ent/linalg.hpp"
#include "su4ent/models.hpp"
#include "su4ent/oracle.hpp"
#include "su4ent/validation.hpp"

using namespace su4ent;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

ModelParams params(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = a + (b - a) * i / (count - 1);
  return t;
}

IntegratorOptions tight(double tol = 1e-10) {
  IntegratorOptions o;
  o.abs_tol = tol;
  o.rel_tol = tol;
  return o;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. Illustrative model against the closed form.
Outcome analytic_reproduction() {
  constexpr double kTol = 1e-6;
  constexpr double kSeconds = 10.0;
  const auto t0 = Clock::now();
  double worst = 0, peak_err = 0;
  for (int n : {4, 20}) {
    const auto basis = make_basis(n);
    const auto pyr = build_pyramid(basis);
    const auto p = params(n);
    auto times = linspace(0, 2 * std::numbers::pi, 200);
    // The closed form peaks at Omega t = pi/2, which the 200-point grid straddles.
    times.push_back(std::numbers::pi / 2);
    std::sort(times.begin(), times.end());
    const auto traj = evolve_schrodinger(h_illustrative(basis, p),
                                         initial_state(InitialState::GroundDown, basis), times,
                                         tight());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double s = entropy_pure(traj.states[i], pyr).s_j;
      worst = std::max(worst, std::abs(s - analytic_entropy_ie(p, times[i])));
      if (times[i] == std::numbers::pi / 2)
        peak_err = std::max(peak_err, std::abs(s - n * std::numbers::ln2));
    }
  }
  const double wall = seconds_since(t0);
  return {worst <= kTol && peak_err <= kTol && wall < kSeconds,
          fmt::format("N=4,20 max|S-S_analytic|={:.3g} (tol {:g}), |S(pi/2)-N ln2|={:.3g} (tol {:g}), "
                      "runtime {:.2f}s (< {:g}s)",
                      worst, kTol, peak_err, kTol, wall, kSeconds)};
}

// 2. BOAT S_J against the exact full-space propagator.
Outcome oracle_pure() {
  constexpr double kTol = 1e-8;
  double worst = 0;
  for (int n : {3, 4}) {
    const auto basis = make_basis(n);
    const auto pyr = build_pyramid(basis);
    const auto times = linspace(0, std::numbers::pi, 50);
    const auto psi0 = initial_state(InitialState::SuperpositionDown, basis);
    const auto traj = evolve_schrodinger(h_boat(basis, params(n)), psi0, times, tight());
    const oracle::ExactPropagator prop(oracle::full_generator(n, Pauli::Plus, Pauli::X) *
                                       oracle::full_generator(n, Pauli::Minus, Pauli::X));
    const CVector full0 = oracle::embed_symmetric(psi0);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double a = entropy_pure(traj.states[i], pyr).s_j;
      const double b = oracle::entropies(prop.evolve(full0, times[i]), n).s_j;
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return {worst <= kTol, fmt::format("BOAT N=3,4, 50 points: max|S_J - S_J^oracle|={:.3g} (tol {:g})",
                                     worst, kTol)};
}

// 3. Leaky BOAT, all five quantities against the full-space Lindblad oracle,
// plus a dense Liouvillian exponential computed outside this code base.
Outcome oracle_mixed() {
  constexpr double kTol = 1e-8;
  const int n = 3;
  const auto basis = make_basis(n);
  const auto pyr = build_pyramid(basis);
  auto p = params(n);
  p.gamma_c = 0.25;
  const auto times = linspace(0, std::numbers::pi, 25);
  const auto psi0 = initial_state(InitialState::SuperpositionDown, basis);
  const auto traj = evolve_lindblad(leaky_boat(basis, p), DensityMatrix::pure(psi0), times, tight(1e-12));

  const CMatrix hf = oracle::full_generator(n, Pauli::Plus, Pauli::X) *
                     oracle::full_generator(n, Pauli::Minus, Pauli::X);
  const CMatrix ld = std::sqrt(p.gamma_c) * oracle::full_generator(n, Pauli::Minus, Pauli::X);
  const CVector f0 = oracle::embed_symmetric(psi0);
  const auto ref = oracle::evolve_lindblad(hf, std::span<const CMatrix>(&ld, 1), f0 * f0.adjoint(),
                                           times, tight(1e-12));
  double worst = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto a = entropy_mixed(traj.states[i], pyr);
    const auto b = oracle::entropies(ref[i], n);
    for (double d : {a.s_j - b.s_j, a.s_k - b.s_k, a.s_total - b.s_total,
                     a.i_j_given_k - b.i_j_given_k, a.i_k_given_j - b.i_k_given_j})
      worst = std::max(worst, std::abs(d));
  }
  const auto end = entropy_mixed(traj.states.back(), pyr);
  const double frozen[] = {1.18760850388203, 1.55693802722086, 1.45597961390923,
                           0.100958413311634, -0.268371110027195};
  const double got[] = {end.s_j, end.s_k, end.s_total, end.i_j_given_k, end.i_k_given_j};
  double frozen_err = 0;
  for (int k = 0; k < 5; ++k) frozen_err = std::max(frozen_err, std::abs(got[k] - frozen[k]));
  return {worst <= kTol && frozen_err <= kTol,
          fmt::format("leaky BOAT N=3 Gamma_c=0.25chi, 25 points, 5 quantities: max err vs oracle "
                      "{:.3g}, vs external reference at chi t=pi {:.3g} (tol {:g})",
                      worst, frozen_err, kTol)};
}

// 4. Exact one-hot cases.
Outcome small_cases() {
  constexpr double kTol = 1e-12;
  const auto pyr3 = build_pyramid(make_basis(3));
  const double ln2_err =
      std::abs(entropy_pure({pyr3.basis(), pyr3.vector(h(1), h(1), h(1))}, pyr3).s_j -
               std::numbers::ln2);
  double top = 0;
  for (int n = 1; n <= 12; ++n) {
    const auto pyr = build_pyramid(make_basis(n));
    for (int mj = -n; mj <= n; mj += 2)
      for (int mk = -n; mk <= n; mk += 2)
        top = std::max(top, std::abs(entropy_pure({pyr.basis(), pyr.vector(h(n), h(mj), h(mk))}, pyr).s_j));
  }
  return {ln2_err <= kTol && top <= kTol,
          fmt::format("N=3 (1/2,1/2,1/2): |S_J-ln2|={:.3g}; l=N/2 one-hots N<=12: max S_J={:.3g} "
                      "(tol {:g})",
                      ln2_err, top, kTol)};
}

// 5. Structural identities for N <= 12.
Outcome structure() {
  constexpr double kGramTol = 1e-10;
  constexpr double kCasimirTol = 1e-8;
  bool counting = true;
  double gram = 0, cas = 0;
  for (int n = 0; n <= 12; ++n) {
    std::int64_t squares = 0;
    std::uint64_t weighted = 0;
    for (auto ell : layer_values(n)) {
      squares += (ell.twice + 1) * (ell.twice + 1);
      weighted += multiplicity(n, ell) * static_cast<std::uint64_t>(ell.twice + 1);
    }
    counting &= squares == (n + 1) * (n + 2) * (n + 3) / 6 && weighted == (std::uint64_t{1} << n);
    const auto basis = make_basis(n);
    const auto pyr = build_pyramid(basis);
    const CMatrix u = pyr.unitary();
    gram = std::max(gram, (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff());
    const SparseC j2 = casimir(basis, Dof::J).matrix;
    const SparseC k2 = casimir(basis, Dof::K).matrix;
    for (auto ell : layer_values(n)) {
      const double l = ell.value();
      for (int mj = -ell.twice; mj <= ell.twice; mj += 2)
        for (int mk = -ell.twice; mk <= ell.twice; mk += 2) {
          const CVector v = pyr.vector(ell, h(mj), h(mk));
          cas = std::max({cas, (j2 * v - l * (l + 1) * v).cwiseAbs().maxCoeff(),
                          (k2 * v - l * (l + 1) * v).cwiseAbs().maxCoeff()});
        }
    }
  }
  return {counting && gram <= kGramTol && cas <= kCasimirTol,
          fmt::format("N<=12: counting identities {}; Gram deviation {:.3g} (tol {:g}); Casimir "
                      "residual {:.3g} (tol {:g})",
                      counting ? "exact" : "VIOLATED", gram, kGramTol, cas, kCasimirTol)};
}

// 6. Pure-state symmetry along a large BOAT trajectory.
Outcome pure_symmetry() {
  constexpr double kTol = 1e-9;
  const int n = 20;
  const auto basis = make_basis(n);
  const auto pyr = build_pyramid(basis);
  const auto times = linspace(0, std::numbers::pi, 101);
  const auto traj = evolve_schrodinger(h_boat(basis, params(n)),
                                       initial_state(InitialState::SuperpositionDown, basis), times,
                                       tight());
  double worst = 0;
  for (const auto& s : traj.states) {
    const auto r = entropy_pure(s, pyr);
    worst = std::max(worst, std::abs(r.s_j - r.s_k));
  }
  return {worst <= kTol,
          fmt::format("BOAT N=20, 101 samples over chi t in [0,pi]: max|S_J-S_K|={:.3g} (tol {:g})",
                      worst, kTol)};
}

// 7. Strong symmetry of the leaky BOAT model.
Outcome strong_symmetry() {
  constexpr double kCommTol = 1e-12;
  constexpr double kSpreadTol = 1e-4;
  const int n = 6;
  const auto basis = make_basis(n);
  const auto pyr = build_pyramid(basis);
  auto p = params(n);
  p.gamma_c = 1.0;
  const auto gen = leaky_boat(basis, p);
  const auto e2 = boat_casimir(basis);
  const double c_h = max_abs(commutator(e2.matrix, gen.hamiltonian.matrix));
  const double c_l = max_abs(commutator(e2.matrix, gen.jumps.at(0).matrix));
  std::vector<double> sk;
  double residual = 0;
  for (double g : {0.1, 1.0, 10.0}) {
    p.gamma_c = g;
    const auto ss = steady_state(leaky_boat(basis, p),
                                 DensityMatrix::pure(initial_state(InitialState::SuperpositionDown, basis)));
    residual = std::max(residual, ss.residual);
    sk.push_back(entropy_mixed(ss.rho, pyr).s_k);
  }
  const double spread = *std::max_element(sk.begin(), sk.end()) - *std::min_element(sk.begin(), sk.end());
  return {c_h <= kCommTol && c_l <= kCommTol && spread <= kSpreadTol,
          fmt::format("N=6: |[E^2,H]|={:.3g}, |[E^2,L_d]|={:.3g} (tol {:g}); steady S_K at "
                      "Gamma_c/chi=0.1,1,10: {:.10f} {:.10f} {:.10f}, spread {:.3g} (tol {:g}), "
                      "residual {:.2g}",
                      c_h, c_l, kCommTol, sk[0], sk[1], sk[2], spread, kSpreadTol, residual)};
}

// 8. SMS properties at N=8.
Outcome sms_claims() {
  const int n = 8;
  const auto basis = make_basis(n);
  const auto pyr = build_pyramid(basis);
  const auto psi0 = initial_state(InitialState::SuperpositionDown, basis);
  const auto rho0 = DensityMatrix::pure(psi0);
  auto p = params(n);
  p.gamma_c = 1.0;

  // (a) transient at W = 2 Gamma_c, every sample in (0, 10] with spacing 0.01.
  p.w = 2.0;
  const auto times = linspace(0, 10, 1001);
  const auto traj = evolve_lindblad(sms(basis, p), rho0, times, tight());
  double min_jk = HUGE_VAL, min_kj = HUGE_VAL, t_min = 0, last_nonpositive = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const auto r = entropy_mixed(traj.states[i], pyr);
    if (std::min(r.i_j_given_k, r.i_k_given_j) < std::min(min_jk, min_kj)) t_min = times[i];
    min_jk = std::min(min_jk, r.i_j_given_k);
    min_kj = std::min(min_kj, r.i_k_given_j);
    if (r.i_j_given_k <= 0 || r.i_k_given_j <= 0) last_nonpositive = times[i];
  }
  const bool transient_ok = min_jk > 0 && min_kj > 0;

  // (b), (c) steady states; the stiff strong-repump case uses implicit marching.
  SteadyStateOptions opts;
  opts.method = SteadyMethod::Implicit;
  auto steady = [&](double w) {
    p.w = w;
    return steady_state(sms(basis, p), rho0, opts);
  };
  const auto s1 = steady(1.0);
  const auto s10 = steady(10.0);
  const auto r1 = entropy_mixed(s1.rho, pyr);
  const auto r10 = entropy_mixed(s10.rho, pyr);
  const bool ordering_ok = r10.i_j_given_k > r1.i_j_given_k && r10.i_k_given_j > r1.i_k_given_j;
  const auto s_strong = steady(1000.0);
  const double j2 = expectation(casimir(basis, Dof::J), s_strong.rho).real();
  const double bound = 0.2 * (n / 2.0) * (n / 2.0 + 1);
  const bool j2_ok = j2 < bound;
  const double residual = std::max({s1.residual, s10.residual, s_strong.residual});

  return {transient_ok && ordering_ok && j2_ok,
          fmt::format("(a) W=2Gamma_c transient over Gamma_c t in (0,10]: min I(J>K)={:.4g}, min "
                      "I(K>J)={:.4g} (at Gamma_c t={:g}; both positive only after Gamma_c t={:g}) -> "
                      "{}; (b) steady I(J>K),I(K>J) at W/Gamma_c=10: {:.4f},{:.4f} vs 1: {:.4f},{:.4f} "
                      "-> {}; (c) W=1000Gamma_c <J^2>_ss={:.4f} < {:g} -> {}; residual {:.2g}",
                      min_jk, min_kj, t_min, last_nonpositive, transient_ok ? "ok" : "violated",
                      r10.i_j_given_k, r10.i_k_given_j, r1.i_j_given_k, r1.i_k_given_j,
                      ordering_ok ? "ok" : "violated", j2, bound, j2_ok ? "ok" : "violated", residual)};
}

// 9. Polynomial scaling of the pure-state pipeline.
Outcome performance() {
  constexpr double kSeconds = 60.0;
  constexpr double kMegabytes = 2048.0;
  constexpr double kSlope = 3.5;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::map<int, double> cost;
  for (int n : {10, 20, 40}) {
    CVector v(sym_dim(n));
    for (auto& x : v) x = Complex(g(rng), g(rng));
    v.normalize();
    int reps = 0;
    const auto t0 = Clock::now();
    double s = 0;
    do {
      clear_operator_cache();
      const auto basis = make_basis(n);
      const auto pyr = build_pyramid(basis);
      const auto p = project_pure({basis, v}, pyr);
      s += entropy_from_blocks(blocks_pure(p, Dof::J)) + entropy_from_blocks(blocks_pure(p, Dof::K));
      ++reps;
    } while (seconds_since(t0) < 0.5);
    cost[n] = seconds_since(t0) / reps;
    if (!std::isfinite(s)) cost[n] = HUGE_VAL;
  }
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double mb = usage.ru_maxrss / 1024.0;
  const double slope = std::log(cost[40] / cost[10]) / std::log(4.0);
  return {cost[40] < kSeconds && mb < kMegabytes && slope <= kSlope,
          fmt::format("pyramid+projection+blocks: N=10 {:.3g}s, N=20 {:.3g}s, N=40 (dim 12341) "
                      "{:.3g}s (< {:g}s); peak RSS {:.0f} MB (< {:g}); log-log slope {:.2f} (<= {:g})",
                      cost[10], cost[20], cost[40], kSeconds, mb, kMegabytes, slope, kSlope)};
}

// 10. The validate command.
Outcome validate_command(const char* cli) {
  std::string detail;
  bool ok = true;
  if (cli) {
    const std::string cmd = std::string(cli) + " validate --n-max 4 > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    ok &= code == 0;
    detail += fmt::format("`validate --n-max 4` exit {}; ", code);
  }
  ValidationOptions opts;
  opts.n_max = 4;
  const auto report = run_validation(opts);
  std::set<std::string> suites;
  double worst = 0;
  for (const auto& c : report.checks) {
    suites.insert(c.suite);
    if (c.tolerance > 0) worst = std::max(worst, c.residual / c.tolerance);
  }
  const std::set<std::string> wanted = {"basis", "operators", "pyramid", "entropy",
                                        "dynamics", "models", "oracle"};
  const bool covered = std::includes(suites.begin(), suites.end(), wanted.begin(), wanted.end());
  ok &= report.passed() && covered;
  detail += fmt::format("{} checks across {} suites, {} failed, worst residual/tolerance {:.2g}",
                        report.checks.size(), suites.size(),
                        std::count_if(report.checks.begin(), report.checks.end(),
                                      [](const CheckResult& c) { return !c.passed; }),
                        worst);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  // Performance first, so the memory figure is not inflated by the open-system runs.
  std::map<int, std::function<Outcome()>> criteria = {
      {9, performance},
      {1, analytic_reproduction},
      {2, oracle_pure},
      {3, oracle_mixed},
      {4, small_cases},
      {5, structure},
      {6, pure_symmetry},
      {7, strong_symmetry},
      {8, sms_claims},
      {10, [cli] { return validate_command(cli); }},
  };
  std::map<int, Outcome> results;
  for (int id : {9, 1, 2, 3, 4, 5, 6, 7, 8, 10}) {
    try {
      results[id] = criteria[id]();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("exception: ") + e.what()};
    }
  }
  int failed = 0;
  for (const auto& [id, r] : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << r.detail << '\n';
    failed += !r.pass;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
