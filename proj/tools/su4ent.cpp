// Command-line front end: one subcommand per model plus sweep and validate.

#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "su4ent/experiment.hpp"
#include "su4ent/validation.hpp"

namespace {

using namespace su4ent;

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kValidation = 3 };

constexpr double kOracleTolerance = 1e-8;

struct Common {
  ExperimentConfig config;
  std::string out;
  std::string units = "nats";
  std::string steady_method = "explicit";
  std::string initial;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--n", c.config.params.n, "particle number N")->capture_default_str();
  app->add_option("--t-max", c.config.t_max, "end of the dimensionless time axis");
  app->add_option("--samples", c.config.samples, "number of output times")->capture_default_str();
  app->add_option("--out", c.out, "output file (default: stdout)");
  app->add_option("--units", c.units, "entropy units")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  app->add_option("--abs-tol", c.config.integrator.abs_tol)->capture_default_str();
  app->add_option("--rel-tol", c.config.integrator.rel_tol)->capture_default_str();
  app->add_option("--jobs", c.config.jobs, "concurrent sweep points")->capture_default_str();
  app->add_option("--seed", c.config.seed, "seed for random validation draws");
  app->add_option("--delta", c.config.params.delta, "detuning Delta")->capture_default_str();
  app->add_option("--omega", c.config.params.omega, "Rabi rate Omega")->capture_default_str();
  app->add_option("--chi", c.config.params.chi, "twisting rate chi")->capture_default_str();
  app->add_option("--gamma-c", c.config.params.gamma_c, "collective decay Gamma_c")
      ->capture_default_str();
  app->add_option("--w", c.config.params.w, "repump rate W")->capture_default_str();
  app->add_option("--initial", c.initial, "initial state (default depends on the model)")
      ->check(CLI::IsMember({"ground-down", "superposition-down"}));
  app->add_option("--steady-method", c.steady_method,
                  "steady-state marching: explicit Runge-Kutta or implicit backward Euler")
      ->check(CLI::IsMember({"explicit", "implicit"}))
      ->capture_default_str();
}

int emit(const std::string& out, const auto& write) {
  if (out.empty()) {
    write(std::cout);
    return kOk;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "error: cannot open " << out << '\n';
    return kUsage;
  }
  write(f);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic entanglement entropy of permutation-symmetric ensembles"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  common.config.params.n = 8;
  common.config.params.gamma_c = 1.0;
  common.config.params.w = 2.0;

  struct ModelCommand {
    Model model;
    const char* help;
    double t_max;
  };
  const ModelCommand models[] = {
      {Model::Illustrative, "two-momentum illustrative model (time axis Omega t)",
       2 * std::numbers::pi},
      {Model::Boat, "closed BOAT model (time axis chi t)", std::numbers::pi},
      {Model::LeakyBoat, "BOAT with collective cavity decay (time axis chi t)", 10.0},
      {Model::Sms, "superradiant master equation with repump (time axis Gamma_c t)", 10.0},
  };
  std::vector<std::pair<CLI::App*, const ModelCommand*>> model_apps;
  bool steady = false, oracle = false;
  bool t_max_given = false;
  for (const auto& m : models) {
    auto* sub = app.add_subcommand(std::string(to_string(m.model)), m.help);
    add_common(sub, common);
    sub->add_flag("--validate-oracle", oracle, "compare against the 4^N oracle (N <= 6)");
    if (m.model == Model::LeakyBoat || m.model == Model::Sms)
      sub->add_flag("--steady-state", steady, "append the steady-state row");
    model_apps.emplace_back(sub, &m);
  }

  auto* sweep = app.add_subcommand("sweep", "steady-state (or final-time) entropies over a parameter");
  std::string sweep_model = "leaky-boat", sweep_param;
  std::vector<double> sweep_values;
  add_common(sweep, common);
  sweep->add_option("--model", sweep_model, "model to sweep")
      ->check(CLI::IsMember({"illustrative", "boat", "leaky-boat", "sms"}))
      ->capture_default_str();
  sweep->add_option("--param", sweep_param, "parameter: n, delta, omega, chi, gamma-c, w")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->delimiter(',');

  auto* validate = app.add_subcommand("validate", "run the invariant and oracle suites");
  ValidationOptions vopts;
  std::string cache;
  validate->add_option("--n-max", vopts.n_max, "largest N checked")->capture_default_str();
  validate->add_option("--seed", vopts.seed, "seed for random states")->capture_default_str();
  validate->add_option("--pyramid-cache", cache, "keep the pyramid cache at this path");
  validate->add_flag("--inject-cache-fault", vopts.inject_cache_fault,
                     "corrupt the cache before reloading it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto& cfg = common.config;
    cfg.steady_state = steady;
    cfg.validate_oracle = oracle;
    if (common.units == "bits") cfg.units = Units::Bits;
    if (common.steady_method == "implicit") cfg.steady_method = SteadyMethod::Implicit;
    if (!common.initial.empty()) cfg.initial = parse_initial_state(common.initial);

    if (validate->parsed()) {
      if (!cache.empty()) vopts.pyramid_cache = cache;
      const auto report = run_validation(vopts);
      print_report(std::cout, report);
      return report.passed() ? kOk : kValidation;
    }

    if (sweep->parsed()) {
      cfg.model = parse_model(sweep_model);
      cfg.sweep_param = parse_sweep_param(sweep_param);
      cfg.sweep_values = sweep_values;
      if (sweep_values.empty()) throw InvalidArgument("--values must list at least one value");
      if (sweep->count("--t-max") == 0)
        for (const auto& m : models)
          if (m.model == cfg.model) cfg.t_max = m.t_max;
      const auto result = run_sweep(cfg);
      return emit(common.out, [&](std::ostream& os) { write_table(os, cfg, result); });
    }

    for (const auto& [sub, m] : model_apps) {
      if (!sub->parsed()) continue;
      cfg.model = m->model;
      t_max_given = sub->count("--t-max") > 0;
      if (!t_max_given) cfg.t_max = m->t_max;
      const auto result = run_experiment(cfg);
      const int rc = emit(common.out, [&](std::ostream& os) { write_table(os, cfg, result); });
      if (rc != kOk) return rc;
      if (result.oracle_max_error) {
        std::cerr << "oracle max |S_poly - S_oracle| = " << *result.oracle_max_error << '\n';
        if (!(*result.oracle_max_error <= kOracleTolerance)) return kValidation;
      }
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
