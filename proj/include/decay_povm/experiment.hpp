#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decay_povm/detection.hpp"
#include "decay_povm/oracle.hpp"
#include "decay_povm/potential.hpp"
#include "decay_povm/regimes.hpp"
#include "decay_povm/state.hpp"

namespace decay_povm {

struct TimeSpec {
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<long> samples;
  std::optional<double> per_peak;  // samples per peak width M / (2 k sigma)
};

struct ExperimentConfig {
  PotentialSpec potential = make_delta_barrier(1.0, 1.0, 1.0);
  std::vector<StateComponent> components;
  double sigma = 0.0;
  OverlapModel overlap = OverlapModel::kSineProjected;
  double L = 0.0;
  TimeSpec time;
  std::vector<std::string> methods;
  RegimeThresholds thresholds;
  QuadratureConfig quadrature;
  LongtimeOptions longtime;
  GridConfig oracle;
  double series_tail_eps = 1e-12;
  long n_cap = 10000;
  std::string output = "out";
};

const std::vector<std::string>& known_methods();

// Throws ConfigError on any schema or value problem.
ExperimentConfig parse_experiment(const nlohmann::json& doc);
ExperimentConfig parse_experiment_file(const std::string& path);

InitialState make_state(const ExperimentConfig& cfg);
std::vector<double> experiment_time_grid(const ExperimentConfig& cfg, const InitialState& state);

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitPrecondition = 3, kExitNumerical = 4 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> files;  // written artifacts, relative to the output directory
  std::string output_dir;
  std::string regime_text;         // human-readable verdict summary
};

// Validates, writes regime.json, checks every method's preconditions, then computes and writes
// one CSV per method plus summary.json.
RunOutcome run_experiment(const std::string& config_path, const std::optional<std::string>& output_override = {});

}  // namespace decay_povm
