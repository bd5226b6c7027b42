#pragma once

#include <complex>
#include <vector>

#include "decay_povm/coefficients.hpp"
#include "decay_povm/potential.hpp"
#include "decay_povm/quadrature.hpp"
#include "decay_povm/regimes.hpp"
#include "decay_povm/series_tools.hpp"
#include "decay_povm/state.hpp"

namespace decay_povm {

struct DetectionConfig {
  double L = 0.0;
  std::vector<double> t_grid;
  double series_tail_eps = 1e-12;
  long n_cap = 10000;
  QuadratureConfig quadrature;
  RegimeThresholds thresholds;
};

// Distance from the packet center to the detector.
double travel_distance(const InitialState& state, double L);
void validate(const PotentialSpec& spec, const DetectionConfig& cfg);

// [0.8 t0, t0 + max(30/Gamma, 50 M beta/k0)] with 10 samples per peak width M/(2 k0 sigma).
// Without a barrier the window spans the flight times of k0 -+ 8 sigma, padded by 10 widths.
std::vector<double> default_time_grid(const PotentialSpec& spec, const InitialState& state, double L,
                                      std::size_t max_samples = 2000000);

// Integration intervals on the k axis for a state (window_sigmas half-width per component).
std::vector<KInterval> state_windows(const InitialState& state, const QuadratureConfig& q);

std::complex<double> z_quadrature(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg,
                                  double t);
std::vector<std::complex<double>> z_quadrature(const PotentialSpec& spec, const InitialState& state,
                                               const DetectionConfig& cfg, QuadratureReport* report);
ProbabilitySeries p_quadrature(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg,
                               QuadratureReport* report = nullptr);

struct SeriesResult {
  ProbabilitySeries series;
  std::vector<double> diagonal;      // n = m part
  std::vector<double> off_diagonal;  // total minus diagonal
  long terms = 0;
  bool cap_hit = false;
  double tail_estimate = 0.0;
};

SeriesResult p_series(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg);
ProbabilitySeries p_diagonal(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg);

struct EnvelopeResult {
  double Gamma = 0.0;
  double t0 = 0.0;
  ProbabilitySeries series;
};
EnvelopeResult p_exponential_envelope(const PotentialSpec& spec, const InitialState& state,
                                      const DetectionConfig& cfg);

struct LongtimeOptions {
  double fit_lo = 10.0;   // in units of M / sigma^2
  double fit_hi = 100.0;
  int fit_points = 25;
  bool fit = true;
};

struct LongtimeResult {
  ProbabilitySeries printed;    // prefactor as printed, exp(2 k0 (beta - i s))
  ProbabilitySeries phase;      // exp(i 2 k0 beta + 2 k0 s)
  ProbabilitySeries rederived;  // first-order expansion at t >> M / sigma^2
  double exponent = 0.0;        // 3/2 + alpha
  double fitted_exponent = 0.0; // -slope of log p vs log t from quadrature, 0 when not fitted
  ProbabilitySeries fit_samples;
  QuadratureReport fit_report;
};
LongtimeResult p_longtime(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg,
                          const LongtimeOptions& opts = {});

struct BeatsSummary {
  double Gamma1 = 0.0;
  double Gamma2 = 0.0;
  double q = 0.0;
  double decoherence_time = 0.0;  // M / (|q| sigma)
  double k0 = 0.0;                // (k1 + k2) / 2
};

struct BeatsResult {
  ProbabilitySeries series;
  std::vector<double> diagonal1;
  std::vector<double> diagonal2;
  std::vector<double> cross;
  BeatsSummary summary;
};
BeatsResult p_beats(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg);

ProbabilitySeries p_semiclassical(const PotentialSpec& spec, const InitialState& state,
                                  const DetectionConfig& cfg);

}  // namespace decay_povm
