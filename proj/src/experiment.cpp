#include "su4ent/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "su4ent/oracle.hpp"

namespace su4ent {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_open(Model m) { return m == Model::LeakyBoat || m == Model::Sms; }

StateVector model_initial_state(const ExperimentConfig& c, const BasisPtr& basis) {
  return initial_state(c.initial.value_or(default_initial_state(c.model)), basis);
}

Eigen::Vector4cd single_particle_start(const ExperimentConfig& c) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  if (c.initial.value_or(default_initial_state(c.model)) == InitialState::GroundDown) {
    v(3) = 1.0;
  } else {
    v(1) = v(3) = 1.0 / std::numbers::sqrt2;
  }
  return v;
}

LindbladGenerator open_generator(Model m, const BasisPtr& basis, const ModelParams& p) {
  return m == Model::LeakyBoat ? leaky_boat(basis, p) : sms(basis, p);
}

CollectiveOperator closed_hamiltonian(Model m, const BasisPtr& basis, const ModelParams& p) {
  return m == Model::Illustrative ? h_illustrative(basis, p) : h_boat(basis, p);
}

std::vector<double> time_grid(const ExperimentConfig& c) {
  std::vector<double> tau(c.samples);
  for (int i = 0; i < c.samples; ++i)
    tau[i] = c.samples == 1 ? 0.0 : c.t_max * i / (c.samples - 1);
  return tau;
}

// Maximum deviation between polynomial and brute-force entropies.
double oracle_error(const ExperimentConfig& c, std::span<const double> physical_times,
                    const std::vector<EntropyReport>& rows) {
  const int n = c.params.n;
  oracle::check_cap(n);
  const auto& p = c.params;
  CMatrix h;
  std::vector<CMatrix> jumps;
  switch (c.model) {
    case Model::Illustrative:
      h = 0.5 * p.delta * oracle::full_generator(n, Pauli::Z, Pauli::I) +
          0.5 * p.omega * oracle::full_generator(n, Pauli::X, Pauli::X);
      break;
    case Model::Boat:
    case Model::LeakyBoat:
      h = p.chi * oracle::full_generator(n, Pauli::Plus, Pauli::X) *
          oracle::full_generator(n, Pauli::Minus, Pauli::X);
      break;
    case Model::Sms:
      h = CMatrix::Zero(Eigen::Index{1} << (2 * n), Eigen::Index{1} << (2 * n));
      break;
  }
  if (is_open(c.model) && p.gamma_c > 0)
    jumps.push_back(std::sqrt(p.gamma_c) * oracle::full_generator(n, Pauli::Minus, Pauli::X));
  if (c.model == Model::Sms && p.w > 0)
    jumps.push_back(std::sqrt(p.w) * oracle::full_generator(n, Pauli::Plus, Pauli::I));

  const CVector psi0 = oracle::product_state(n, single_particle_start(c));
  std::vector<EntropyReport> ref;
  if (is_open(c.model)) {
    const CMatrix rho0 = psi0 * psi0.adjoint();
    for (const auto& rho : oracle::evolve_lindblad(h, jumps, rho0, physical_times, c.integrator))
      ref.push_back(oracle::entropies(rho, n));
  } else {
    const oracle::ExactPropagator prop(h);
    for (double t : physical_times) ref.push_back(oracle::entropies(prop.evolve(psi0, t), n));
  }
  double err = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = ref[i];
    for (double d : {a.s_j - b.s_j, a.s_k - b.s_k, a.s_total - b.s_total,
                     a.i_j_given_k - b.i_j_given_k, a.i_k_given_j - b.i_k_given_j})
      err = std::max(err, std::abs(d));
  }
  return err;
}

SteadyStateRow steady_row(const ExperimentConfig& c, const ModelParams& p,
                          const PyramidBasis& pyr, double parameter) {
  const auto& basis = pyr.basis();
  SteadyStateRow row;
  row.parameter = parameter;
  const auto psi0 = model_initial_state(c, basis);
  const auto j2 = casimir(basis, Dof::J);
  if (is_open(c.model)) {
    const auto gen = open_generator(c.model, basis, p);
    SteadyStateOptions opts;
    opts.method = c.steady_method;
    opts.integrator = c.integrator;
    const auto ss = steady_state(gen, DensityMatrix::pure(psi0), opts);
    row.report = entropy_mixed(ss.rho, pyr);
    row.j2 = expectation(j2, ss.rho).real();
    row.residual = ss.residual;
    row.time = ss.time * c.time_unit_rate();
    row.report.time = row.time;
  } else {
    ExperimentConfig local = c;
    local.params = p;
    const double t = c.t_max / local.time_unit_rate();
    const double grid[2] = {0.0, t};
    const auto traj = evolve_schrodinger(closed_hamiltonian(c.model, basis, p), psi0,
                                         c.t_max > 0 ? std::span<const double>(grid)
                                                     : std::span<const double>(grid, 1),
                                         c.integrator);
    row.report = entropy_pure(traj.states.back(), pyr);
    row.j2 = expectation(j2, traj.states.back()).real();
    row.time = c.t_max;
    row.report.time = c.t_max;
  }
  return row;
}

void set_param(ModelParams& p, SweepParam which, double v) {
  switch (which) {
    case SweepParam::N:
      if (v != std::floor(v) || v < 1) throw InvalidArgument("swept N must be a positive integer");
      p.n = static_cast<int>(v);
      break;
    case SweepParam::Delta: p.delta = v; break;
    case SweepParam::Omega: p.omega = v; break;
    case SweepParam::Chi: p.chi = v; break;
    case SweepParam::GammaC: p.gamma_c = v; break;
    case SweepParam::W: p.w = v; break;
  }
}

double scale(Units u) { return u == Units::Bits ? 1.0 / std::numbers::ln2 : 1.0; }

std::string num(double v) { return fmt::format("{:.12g}", v); }

void write_metadata(std::ostream& os, const ExperimentConfig& c, std::int64_t dim,
                    double wall) {
  const auto& p = c.params;
  fmt::print(os, "# su4ent {}\n", kVersion);
  fmt::print(os,
             "# config model={} n={} delta={} omega={} chi={} gamma_c={} w={} t_max={} "
             "samples={} units={} abs_tol={} rel_tol={} steady_state={} steady_method={} "
             "initial={} seed={}",
             to_string(c.model), p.n, num(p.delta), num(p.omega), num(p.chi), num(p.gamma_c),
             num(p.w), num(c.t_max), c.samples, c.units == Units::Bits ? "bits" : "nats",
             num(c.integrator.abs_tol), num(c.integrator.rel_tol), c.steady_state ? 1 : 0,
             c.steady_method == SteadyMethod::Implicit ? "implicit" : "explicit",
             to_string(c.initial.value_or(default_initial_state(c.model))), c.seed);
  if (c.sweep_param) {
    fmt::print(os, " sweep={} values=", to_string(*c.sweep_param));
    for (std::size_t i = 0; i < c.sweep_values.size(); ++i)
      fmt::print(os, "{}{}", i ? "," : "", num(c.sweep_values[i]));
  }
  os << '\n';
  if (dim > 0) fmt::print(os, "# basis_dim={}\n", dim);
  static constexpr const char* axis[] = {"Omega*t", "chi*t", "chi*t", "Gamma_c*t"};
  fmt::print(os, "# time_axis={}\n", axis[static_cast<int>(c.model)]);
  fmt::print(os, "# wall_time_s={:.3f}\n", wall);
}

void write_report(std::ostream& os, const EntropyReport& r, double k) {
  fmt::print(os, "{}\t{}\t{}\t{}\t{}", num(k * r.s_j), num(k * r.s_k), num(k * r.s_total),
             num(k * r.i_j_given_k), num(k * r.i_k_given_j));
}

}  // namespace

InitialState default_initial_state(Model m) {
  // The illustrative model starts all-ground, all-down; the others from the
  // superposition of internal states.
  return m == Model::Illustrative ? InitialState::GroundDown : InitialState::SuperpositionDown;
}

std::string_view to_string(InitialState s) {
  return s == InitialState::GroundDown ? "ground-down" : "superposition-down";
}

InitialState parse_initial_state(std::string_view s) {
  for (auto k : {InitialState::GroundDown, InitialState::SuperpositionDown})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown initial state '" + std::string(s) + "'");
}

std::string_view to_string(Model m) {
  switch (m) {
    case Model::Illustrative: return "illustrative";
    case Model::Boat: return "boat";
    case Model::LeakyBoat: return "leaky-boat";
    case Model::Sms: return "sms";
  }
  return "?";
}

Model parse_model(std::string_view s) {
  for (auto m : {Model::Illustrative, Model::Boat, Model::LeakyBoat, Model::Sms})
    if (to_string(m) == s) return m;
  throw InvalidArgument("unknown model '" + std::string(s) + "'");
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::N: return "n";
    case SweepParam::Delta: return "delta";
    case SweepParam::Omega: return "omega";
    case SweepParam::Chi: return "chi";
    case SweepParam::GammaC: return "gamma-c";
    case SweepParam::W: return "w";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view s) {
  for (auto p : {SweepParam::N, SweepParam::Delta, SweepParam::Omega, SweepParam::Chi,
                 SweepParam::GammaC, SweepParam::W})
    if (to_string(p) == s) return p;
  throw InvalidArgument("unknown sweep parameter '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  params.validate();
  if (samples < 1) throw InvalidArgument("sample count must be positive");
  if (!std::isfinite(t_max) || t_max < 0) throw InvalidArgument("t_max must be finite and >= 0");
  if (jobs < 1) throw InvalidArgument("jobs must be positive");
  if (!(integrator.abs_tol > 0) || !(integrator.rel_tol > 0))
    throw InvalidArgument("integrator tolerances must be positive");
  for (double v : sweep_values)
    if (!std::isfinite(v)) throw InvalidArgument("sweep values must be finite");
  if (steady_state && !is_open(model))
    throw InvalidArgument("--steady-state needs an open model (leaky-boat or sms)");
  if (!(time_unit_rate() > 0)) throw InvalidArgument("the time-axis rate must be nonzero");
}

double ExperimentConfig::time_unit_rate() const {
  switch (model) {
    case Model::Illustrative: return std::abs(params.omega);
    case Model::Boat:
    case Model::LeakyBoat: return std::abs(params.chi);
    case Model::Sms: return params.gamma_c;
  }
  return 0;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto start = Clock::now();
  if (c.validate_oracle) oracle::check_cap(c.params.n);

  const auto basis = make_basis(c.params.n);
  const auto pyr = build_pyramid(basis);
  const auto tau = time_grid(c);
  std::vector<double> t(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) t[i] = tau[i] / c.time_unit_rate();

  ExperimentResult r;
  r.basis_dim = basis->size();
  const auto psi0 = model_initial_state(c, basis);
  std::optional<DensityMatrix> last;
  if (is_open(c.model)) {
    const auto gen = open_generator(c.model, basis, c.params);
    auto traj = evolve_lindblad(gen, DensityMatrix::pure(psi0), t, c.integrator);
    for (std::size_t i = 0; i < t.size(); ++i) {
      r.rows.push_back(entropy_mixed(traj.states[i], pyr));
      r.rows.back().time = tau[i];
    }
    last = std::move(traj.states.back());
  } else {
    const auto traj =
        evolve_schrodinger(closed_hamiltonian(c.model, basis, c.params), psi0, t, c.integrator);
    for (std::size_t i = 0; i < t.size(); ++i) {
      r.rows.push_back(entropy_pure(traj.states[i], pyr));
      r.rows.back().time = tau[i];
    }
  }
  if (c.model == Model::Illustrative)
    for (double ti : t)
      r.analytic.push_back(c.params.delta == 0 ? analytic_entropy_ie(c.params, ti) : NAN);

  if (c.validate_oracle) r.oracle_max_error = oracle_error(c, t, r.rows);

  if (c.steady_state) {
    const auto gen = open_generator(c.model, basis, c.params);
    SteadyStateOptions opts;
    opts.method = c.steady_method;
    opts.integrator = c.integrator;
    const auto ss = steady_state(gen, *last, opts);
    SteadyStateRow row;
    row.report = entropy_mixed(ss.rho, pyr);
    row.j2 = expectation(casimir(basis, Dof::J), ss.rho).real();
    row.residual = ss.residual;
    row.time = tau.back() + ss.time * c.time_unit_rate();
    row.report.time = row.time;
    r.steady = row;
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

SweepResult run_sweep(const ExperimentConfig& c) {
  c.validate();
  if (!c.sweep_param) throw InvalidArgument("sweep needs a parameter name");
  if (c.sweep_values.empty()) throw InvalidArgument("sweep needs at least one value");
  const auto start = Clock::now();

  std::vector<ModelParams> points(c.sweep_values.size(), c.params);
  for (std::size_t i = 0; i < points.size(); ++i) {
    set_param(points[i], *c.sweep_param, c.sweep_values[i]);
    ExperimentConfig check = c;
    check.params = points[i];
    check.validate();
  }

  // Pyramids are built up front, one per distinct N, so workers only read them.
  std::map<int, PyramidBasis> pyramids;
  for (const auto& p : points)
    if (!pyramids.contains(p.n)) pyramids.emplace(p.n, build_pyramid(make_basis(p.n)));

  SweepResult r;
  if (*c.sweep_param != SweepParam::N) r.basis_dim = sym_dim(c.params.n);
  r.rows.resize(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        r.rows[i] = steady_row(c, points[i], pyramids.at(points[i].n), c.sweep_values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(c.jobs, points.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  r.wall_seconds = seconds_since(start);
  return r;
}

void write_table(std::ostream& os, const ExperimentConfig& c, const ExperimentResult& r) {
  write_metadata(os, c, r.basis_dim, r.wall_seconds);
  if (r.oracle_max_error) fmt::print(os, "# oracle_max_abs_error={}\n", num(*r.oracle_max_error));
  if (r.steady)
    fmt::print(os, "# steady_state residual={} J2={} time={}\n", num(r.steady->residual),
               num(r.steady->j2), num(r.steady->time));
  const double k = scale(c.units);
  const bool analytic = c.model == Model::Illustrative;
  os << "t\tS_J\tS_K\tS_total\tI_JK\tI_KJ" << (analytic ? "\tS_analytic" : "") << '\n';
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    os << num(r.rows[i].time) << '\t';
    write_report(os, r.rows[i], k);
    if (analytic) os << '\t' << num(k * r.analytic[i]);
    os << '\n';
  }
  if (r.steady) {
    os << "inf\t";
    write_report(os, r.steady->report, k);
    os << '\n';
  }
}

void write_table(std::ostream& os, const ExperimentConfig& c, const SweepResult& r) {
  write_metadata(os, c, r.basis_dim, r.wall_seconds);
  const double k = scale(c.units);
  os << to_string(*c.sweep_param) << "\tS_J\tS_K\tS_total\tI_JK\tI_KJ\tJ2\tresidual\tt\n";
  for (const auto& row : r.rows) {
    os << num(row.parameter) << '\t';
    write_report(os, row.report, k);
    os << '\t' << num(row.j2) << '\t' << num(row.residual) << '\t' << num(row.time) << '\n';
  }
}

}  // namespace su4ent
