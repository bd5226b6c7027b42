#pragma once

#include <complex>
#include <vector>

#include "decay_povm/potential.hpp"
#include "decay_povm/quadrature.hpp"
#include "decay_povm/series_tools.hpp"
#include "decay_povm/state.hpp"

namespace decay_povm {

struct SurvivalSeries {
  std::vector<double> t;
  std::vector<std::complex<double>> amplitude;
  std::vector<double> w;
  std::vector<double> minus_wdot;
  std::string method;
};

// Fills w and minus_wdot from amplitude.
SurvivalSeries make_survival(std::vector<double> t, std::vector<std::complex<double>> amplitude, std::string method);

// Energy distribution |c_k|^2 of the state over the half-line scattering modes.
double spectral_density(const PotentialSpec& spec, const InitialState& state, double k);

SurvivalSeries survival_quadrature(const PotentialSpec& spec, const InitialState& state,
                                   const std::vector<double>& t_grid, const QuadratureConfig& qcfg = {},
                                   QuadratureReport* report = nullptr);

struct BeatsChannel {
  double weight2 = 0.5;  // |w_j|^2
  double Gamma = 0.0;
  double k = 0.0;
  double beta = 0.0;
  double theta = 0.0;    // Arg R at k
};

double beats_survival_value(const BeatsChannel& c1, const BeatsChannel& c2, double M, double t);

struct SurvivalBeatsResult {
  SurvivalSeries series;
  BeatsChannel channel1;
  BeatsChannel channel2;
  // Maximal runs of the grid where -dw/dt < 0, as [t_begin, t_end] pairs.
  std::vector<std::pair<double, double>> negative_intervals;
  double min_minus_wdot = 0.0;
};

SurvivalBeatsResult survival_beats(const PotentialSpec& spec, const InitialState& state,
                                   const std::vector<double>& t_grid);

struct DecayFit {
  double rate = 0.0;
  std::size_t points = 0;
  bool from_peaks = false;
  bool from_period_means = false;
};

// Decay rate of w over [t_lo, t_hi]. With period > 0: log-linear fit of the trapezoidal mean of w
// over consecutive periods starting at t_lo (at least three). Otherwise through the revival maxima
// when at least three are found, else through all samples.
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& w, double t_lo, double t_hi,
                        double period = 0.0);

}  // namespace decay_povm
