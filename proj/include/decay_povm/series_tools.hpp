#pragma once

#include <span>
#include <string>
#include <vector>

namespace decay_povm {

// Sampled p(t) (or w(t)) together with the formula that produced it.
struct ProbabilitySeries {
  std::vector<double> t;
  std::vector<double> p;
  std::string method;
  double mass_detected = 0.0;
  double max_negative_violation = 0.0;  // largest |p| over negative samples, before clipping
  bool positivity_violated = false;     // some sample was below -1e-12
};

// Clips negatives above -1e-12 to zero, records violations and the trapezoid mass.
ProbabilitySeries make_series(std::vector<double> t, std::vector<double> p, std::string method);

double trapezoid(std::span<const double> x, std::span<const double> y);
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Strict local maxima on a 3-point stencil; a plateau is reported at its leftmost index.
std::vector<std::size_t> find_peaks(std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);
// Slope of log y against x, or of log y against log x.
LinearFit log_linear_fit(std::span<const double> x, std::span<const double> y);
LinearFit log_log_fit(std::span<const double> x, std::span<const double> y);

// Centered moving average with a window in the units of t (trapezoid-weighted).
std::vector<double> moving_average(std::span<const double> t, std::span<const double> y, double window);

// Half-width of the peak at index i where y drops to level * y[i], by linear interpolation on both sides.
double peak_half_width(std::span<const double> t, std::span<const double> y, std::size_t i, double level);
// Standard deviation of y as a distribution in t over [lo, hi) index range.
double rms_width(std::span<const double> t, std::span<const double> y, std::size_t lo, std::size_t hi);

// Central differences inside, one-sided at the ends.
std::vector<double> derivative(std::span<const double> t, std::span<const double> y);

std::string format_double(double v);

}  // namespace decay_povm
