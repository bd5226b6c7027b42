#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace decay_povm {

struct QuadratureRule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Interval of the k axis; with sqrt_map the rule is applied in u = sqrt(k) (dk = 2u du).
struct KInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool sqrt_map = false;
};

// Composite rule over several intervals with about `panels` panels in total, split by length.
QuadratureRule composite_rule(std::span<const KInterval> intervals, int panels, int order);

struct QuadratureConfig {
  double window_sigmas = 8.0;
  int nodes = 2049;
  double rel_tol = 1e-8;
  long max_nodes = 1L << 22;
  int order = 16;
  bool infrared = false;  // integrate down to k = 0 with the sqrt map
};

struct QuadratureReport {
  long nodes = 0;
  int doublings = 0;
  bool converged = false;
  double max_change = 0.0;   // last relative change at the worst t
  double l1_norm = 0.0;      // sum |f_i w_i|, the cancellation floor scale
  long near_resonance_nodes = 0;
};

// I(t) = integral of f(k) exp(-i k^2 t / (2M)) over the intervals, for every t.
// f is evaluated once per node; node count doubles until successive results agree.
std::vector<std::complex<double>> phase_integral(const std::function<std::complex<double>(double)>& f,
                                                 std::span<const KInterval> intervals,
                                                 std::span<const double> ts, double M,
                                                 const QuadratureConfig& cfg, QuadratureReport* report);

}  // namespace decay_povm
