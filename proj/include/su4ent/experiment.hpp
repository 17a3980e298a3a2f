#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "su4ent/dynamics.hpp"
#include "su4ent/entropy.hpp"
#include "su4ent/models.hpp"

namespace su4ent {

inline constexpr const char* kVersion = "0.1.0";

enum class Model { Illustrative, Boat, LeakyBoat, Sms };
enum class Units { Nats, Bits };

std::string_view to_string(Model m);
Model parse_model(std::string_view s);

InitialState default_initial_state(Model m);
std::string_view to_string(InitialState s);
InitialState parse_initial_state(std::string_view s);

/// Parameters that a sweep may vary.
enum class SweepParam { N, Delta, Omega, Chi, GammaC, W };
std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view s);

struct ExperimentConfig {
  Model model = Model::Illustrative;
  ModelParams params;
  double t_max = 1.0;  // dimensionless: Omega t, chi t or Gamma_c t
  int samples = 101;
  std::optional<SweepParam> sweep_param;
  std::vector<double> sweep_values;
  Units units = Units::Nats;
  IntegratorOptions integrator;
  bool steady_state = false;
  SteadyMethod steady_method = SteadyMethod::Explicit;
  std::optional<InitialState> initial;  // model default if unset
  bool validate_oracle = false;
  int jobs = 1;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on an unusable configuration.
  void validate() const;
  /// Rate that turns the dimensionless time axis into physical time.
  double time_unit_rate() const;
};

struct SteadyStateRow {
  double parameter = 0;
  EntropyReport report;
  double j2 = 0;  // <J^2>
  double residual = 0;
  double time = 0;
};

struct ExperimentResult {
  std::int64_t basis_dim = 0;
  std::vector<EntropyReport> rows;  // time column is dimensionless
  std::vector<double> analytic;     // illustrative only
  std::optional<SteadyStateRow> steady;
  std::optional<double> oracle_max_error;
  double wall_seconds = 0;
};

struct SweepResult {
  std::int64_t basis_dim = 0;  // 0 when N is swept
  std::vector<SteadyStateRow> rows;  // in sweep order
  double wall_seconds = 0;
};

/// Time series (and optionally the steady state) for one model.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One steady-state row per sweep value. Closed models report the state at t_max.
SweepResult run_sweep(const ExperimentConfig& config);

void write_table(std::ostream& os, const ExperimentConfig& config, const ExperimentResult& r);
void write_table(std::ostream& os, const ExperimentConfig& config, const SweepResult& r);

}  // namespace su4ent
