#pragma once

#include <optional>
#include <vector>

#include "decay_povm/potential.hpp"
#include "decay_povm/series_tools.hpp"
#include "decay_povm/state.hpp"
#include "decay_povm/survival.hpp"

namespace decay_povm {

struct GridConfig {
  double dx = 0.0;              // 0: 0.05 / k_max
  double dt = 0.0;              // 0: 0.1 M / k_max^2
  double x_max = 0.0;           // 0: 1.5 L + absorber width
  double absorber_width = 0.0;  // 0: max(0.25 L, 40 / k_min)
  double absorber_strength = 0.0;  // 0: k_min^2 / (2 M)
  int delta_cells = 1;          // nodes carrying each delta spike
  double window_sigmas = 8.0;   // k_max = k_top + window_sigmas * sigma
  std::size_t max_cells = 50000000;
  double max_norm_drift = 1e-6;
  bool convergence_check = false;  // rerun with dx/2 and dt/2
};

struct GridEvolution {
  double x_max = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  std::size_t cells = 0;
  long steps = 0;
  double absorber_start = 0.0;
  double absorber_strength = 0.0;
  double norm_drift = 0.0;        // max |norm(t) - norm(0) + absorbed(t)|
  double absorbed = 0.0;          // at the last time
  double detector_position = 0.0; // x where the current is sampled
};

struct OracleResult {
  SurvivalSeries survival;
  ProbabilitySeries current;
  GridEvolution grid;
  // Relative sup-norm changes under dx, dt halving, when requested.
  std::optional<double> survival_change;
  std::optional<double> current_change;
};

OracleResult evolve_and_observe(const PotentialSpec& spec, const InitialState& state, double L,
                                const std::vector<double>& t_grid, const GridConfig& cfg = {});

}  // namespace decay_povm
