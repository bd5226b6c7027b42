#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "decay_povm/potential.hpp"

namespace decay_povm {

using cplx = std::complex<double>;

struct ScatteringData {
  double k = 0.0;
  cplx T;
  cplx R;   // incidence from the left (region I side)
  cplx Rp;  // incidence from the right
  double Theta = 0.0;  // principal branch, (-pi, pi]
  bool theta_pole = false;
};

// Real 2x2 propagator of (psi, psi') scaled as exp(log_scale) * m.
struct TransferMatrix {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major m11 m12 m21 m22
  double log_scale = 0.0;
  double det() const { return m[0] * m[3] - m[1] * m[2]; }
};

// Propagator across a constant region of width w where psi'' = -(k^2 - 2MV) psi.
TransferMatrix segment_matrix(double k, double V, double M, double w);
TransferMatrix delta_matrix(double kappa);
TransferMatrix barrier_matrix(const PotentialSpec& spec, double k);

ScatteringData amplitudes(const PotentialSpec& spec, double k);
std::vector<ScatteringData> amplitudes(const PotentialSpec& spec, std::span<const double> ks);

ScatteringData closed_form_square(double a, double d, double V0, double M, double k);
ScatteringData closed_form_delta(double a, double kappa, double k);

struct ThetaValue {
  double value = 0.0;
  bool pole = false;
};

ThetaValue theta(const ScatteringData& sd);
// Continuous branch along an increasing grid (nearest-branch continuation from the first point).
std::vector<double> theta_unwrapped(const PotentialSpec& spec, std::span<const double> ks);
double nearest_branch(double principal, double reference);

// Region-I amplitude tau = T/(1+R) and exp(i Theta) of the half-line mode
// exp(-ikr) - exp(i Theta) exp(ikr), obtained by propagating sin(kr) through the barrier.
struct HalfLineMode {
  cplx tau;
  cplx exp_itheta;
};
HalfLineMode half_line_mode(const PotentialSpec& spec, double k);

struct DirichletMode {
  int n = 0;
  double k = 0.0;
  double theta = 0.0;  // continuous branch
  cplx D;
  int iterations = 0;
};

std::vector<DirichletMode> dirichlet_modes(const PotentialSpec& spec, double L, int n_max);

}  // namespace decay_povm
