#pragma once

#include "decay_povm/potential.hpp"
#include "decay_povm/scattering.hpp"

namespace decay_povm {

struct BarrierCoefficients {
  double k0 = 0.0;
  double lambda = 0.0;  // Im d log T / dk
  double xi = 0.0;      // 1/(2 k0) + Re d log T / dk
  double beta = 0.0;    // Im d log R / dk
  double s = 0.0;       // Re d log R / dk
  double w = 0.0;       // d log|T| / dk
  double argR = 0.0;
  double alpha = 0.0;   // T ~ k^alpha as k -> 0
  cplx T;
  cplx R;
  double T2 = 0.0;  // |T|^2
  double R2 = 0.0;  // |R|^2
  // second log-derivatives, used by the expansion-validity ratios
  cplx d2logT;
  cplx d2logR;
  // residuals of the identities, relative
  double ident1_residual = 0.0;
  double symmetric_residual = 0.0;  // only meaningful when symmetric == true
  bool symmetric = false;
};

struct CoefficientOptions {
  double alpha_window_lo = 1e-4;
  double alpha_window_hi = 1e-2;
  int alpha_points = 21;
};

BarrierCoefficients coefficients_at(const PotentialSpec& spec, double k0,
                                    const CoefficientOptions& opts = {});

double first_detection_time(const BarrierCoefficients& c, double L, double M);
double crossing_time(const BarrierCoefficients& c, const PotentialSpec& spec);
// Least-squares slope of log|T| against log k over [lo, hi] * k_char.
double threshold_exponent(const PotentialSpec& spec, double k_char, double lo, double hi, int points);

}  // namespace decay_povm
