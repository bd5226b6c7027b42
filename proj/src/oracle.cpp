#include "decay_povm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "decay_povm/errors.hpp"

namespace decay_povm {

namespace {

using cplx = std::complex<double>;

struct Resolved {
  double dx, dt, x_max, abs_start, abs_width, W0;
};

Resolved resolve(const InitialState& state, double M, double L, const GridConfig& cfg) {
  double kmin = state.components()[0].k, ktop = kmin;
  for (const auto& c : state.components()) {
    kmin = std::min(kmin, c.k);
    ktop = std::max(ktop, c.k);
  }
  const double kmax = ktop + cfg.window_sigmas * state.sigma();
  Resolved r{};
  r.dx = cfg.dx > 0.0 ? cfg.dx : 0.05 / kmax;
  r.dt = cfg.dt > 0.0 ? cfg.dt : 0.1 * M / (kmax * kmax);
  r.abs_width = cfg.absorber_width > 0.0 ? cfg.absorber_width : std::max(0.25 * L, 40.0 / kmin);
  r.W0 = cfg.absorber_strength > 0.0 ? cfg.absorber_strength : kmin * kmin / (2.0 * M);
  r.x_max = cfg.x_max > 0.0 ? cfg.x_max : 1.5 * L + r.abs_width;
  r.abs_start = r.x_max - r.abs_width;
  if (r.abs_start <= L) throw ConfigError("oracle: absorber overlaps the detector");
  return r;
}

// Average of the piecewise-constant part over [x - h/2, x + h/2].
double cell_average(const PotentialSpec& spec, double x, double h) {
  double acc = 0.0;
  for (const Segment& s : spec.segments()) {
    const double lo = std::max(s.x0, x - 0.5 * h), hi = std::min(s.x1, x + 0.5 * h);
    if (hi > lo) acc += s.V * (hi - lo);
  }
  return acc / h;
}

struct Run {
  std::vector<cplx> overlap;
  std::vector<double> current;
  GridEvolution grid;
};

Run run_grid(const PotentialSpec& spec, const InitialState& state, double L, const std::vector<double>& ts,
             const Resolved& r, const GridConfig& cfg) {
  const double M = spec.mass();
  const double dx = r.dx;
  const auto n = static_cast<std::size_t>(std::ceil(r.x_max / dx));
  if (n > cfg.max_cells) throw ConfigError("oracle: grid of " + std::to_string(n) + " cells exceeds the budget");
  // interior nodes x_j = j dx, j = 1 .. n-1; psi(0) = psi(x_max) = 0
  const std::size_t m = n - 1;
  std::vector<double> V(m, 0.0), W(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = (i + 1) * dx;
    V[i] = cell_average(spec, x, dx);
    if (x > r.abs_start) {
      const double u = (x - r.abs_start) / r.abs_width;
      W[i] = r.W0 * u * u;
    }
  }
  const int dc = std::max(1, cfg.delta_cells);
  for (const DeltaSpike& d : spec.deltas()) {
    const long centre = std::lround(d.x / dx) - 1;
    const long first = centre - (dc - 1) / 2;
    for (int c = 0; c < dc; ++c) {
      const long idx = first + c;
      if (idx >= 0 && idx < static_cast<long>(m)) V[idx] += d.kappa / (M * dx * dc);
    }
  }

  // initial Gaussian superposition, normalized on the grid
  std::vector<cplx> psi0(m);
  const double delta = state.delta();
  const double c = state.center();
  double norm = 0.0;
  // the sine-projected state is the odd extension phi(x) - phi(-x) restricted to x > 0
  const bool odd = state.overlap() == OverlapModel::kSineProjected;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = (i + 1) * dx;
    const double g = std::exp(-(x - c) * (x - c) / (4.0 * delta * delta));
    const double gm = odd ? std::exp(-(x + c) * (x + c) / (4.0 * delta * delta)) : 0.0;
    cplx v{0.0, 0.0};
    for (const auto& comp : state.components()) {
      if (g > 1e-300) v += comp.weight * std::polar(g, comp.k * (x - c));
      if (gm > 1e-300) v -= comp.weight * std::polar(gm, -comp.k * (x + c));
    }
    psi0[i] = v;
    norm += std::norm(v) * dx;
  }
  const double sc = 1.0 / std::sqrt(norm);
  std::size_t s_lo = m, s_hi = 0;
  double peak = 0.0;
  for (auto& v : psi0) {
    v *= sc;
    peak = std::max(peak, std::abs(v));
  }
  for (std::size_t i = 0; i < m; ++i)
    if (std::abs(psi0[i]) > 1e-18 * peak) {
      s_lo = std::min(s_lo, i);
      s_hi = i + 1;
    }

  const auto jL = static_cast<std::size_t>(std::max(1L, std::lround(L / dx - 0.5))) - 1;

  Run out;
  out.grid.x_max = n * dx;
  out.grid.dx = dx;
  out.grid.cells = n;
  out.grid.absorber_start = r.abs_start;
  out.grid.absorber_strength = r.W0;
  out.grid.detector_position = (jL + 1.5) * dx;

  std::vector<cplx> psi = psi0;
  auto observe = [&]() {
    cplx acc{0.0, 0.0};
    for (std::size_t i = s_lo; i < s_hi; ++i) acc += std::conj(psi0[i]) * psi[i];
    out.overlap.push_back(acc * dx);
    out.current.push_back(std::imag(std::conj(psi[jL]) * psi[jL + 1]) / (M * dx));
  };

  // Crank-Nicolson with a cached Thomas factorization per step size
  const double kin = 1.0 / (2.0 * M * dx * dx);
  double cached_h = -1.0;
  std::vector<cplx> cprime(m), inv(m), diagA(m), diagB(m);
  cplx offA, offB;
  auto factor = [&](double h) {
    const cplx ih2{0.0, 0.5 * h};
    offA = -ih2 * kin;
    offB = ih2 * kin;
    for (std::size_t i = 0; i < m; ++i) {
      const cplx Hd{2.0 * kin + V[i], -W[i]};
      diagA[i] = 1.0 + ih2 * Hd;
      diagB[i] = 1.0 - ih2 * Hd;
    }
    cplx prev_c{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
      const cplx den = diagA[i] - offA * prev_c;
      inv[i] = 1.0 / den;
      cprime[i] = offA * inv[i];
      prev_c = cprime[i];
    }
    cached_h = h;
  };
  std::vector<cplx> rhs(m);
  double absorbed = 0.0;
  double drift = 0.0;
  double norm0 = 0.0;
  for (const auto& v : psi) norm0 += std::norm(v);
  norm0 *= dx;
  auto step = [&](double h) {
    if (h != cached_h) factor(h);
    for (std::size_t i = 0; i < m; ++i) {
      cplx v = diagB[i] * psi[i];
      if (i > 0) v += offB * psi[i - 1];
      if (i + 1 < m) v += offB * psi[i + 1];
      rhs[i] = v;
    }
    cplx prev{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
      prev = (rhs[i] - offA * prev) * inv[i];
      rhs[i] = prev;
    }
    double sink = 0.0;
    cplx next{0.0, 0.0};
    for (std::size_t i = m; i-- > 0;) {
      const cplx v = rhs[i] - cprime[i] * next;
      if (W[i] > 0.0) sink += W[i] * std::norm(0.5 * (v + psi[i]));
      psi[i] = v;
      next = v;
    }
    absorbed += 2.0 * h * sink * dx;
    ++out.grid.steps;
  };

  double t = 0.0;
  for (double target : ts) {
    if (target < t) throw InvalidArgument("oracle: times must be non-negative and increasing");
    const double span = target - t;
    if (span > 0.0) {
      const auto k = static_cast<long>(std::ceil(span / r.dt - 1e-9));
      const double h = span / static_cast<double>(k);
      for (long s = 0; s < k; ++s) step(h);
    }
    t = target;
    observe();
    double nrm = 0.0;
    for (const auto& v : psi) nrm += std::norm(v);
    drift = std::max(drift, std::abs(nrm * dx - norm0 + absorbed));
  }
  out.grid.dt = r.dt;
  out.grid.norm_drift = drift;
  out.grid.absorbed = absorbed;
  if (drift > cfg.max_norm_drift)
    throw NumericalError("oracle: norm drift " + format_double(drift) + " exceeds " +
                         format_double(cfg.max_norm_drift));
  return out;
}

double relative_sup_change(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

OracleResult evolve_and_observe(const PotentialSpec& spec, const InitialState& state, double L,
                                const std::vector<double>& t_grid, const GridConfig& cfg) {
  if (t_grid.empty()) throw InvalidArgument("oracle: empty time grid");
  if (!(L > spec.b())) throw InvalidArgument("oracle: detector must lie beyond the barrier");
  const Resolved r = resolve(state, spec.mass(), L, cfg);
  Run run = run_grid(spec, state, L, t_grid, r, cfg);
  OracleResult out;
  out.survival = make_survival(t_grid, run.overlap, "oracle_survival");
  out.current = make_series(t_grid, run.current, "oracle_current");
  out.grid = run.grid;
  if (cfg.convergence_check) {
    Resolved fine = r;
    fine.dx *= 0.5;
    fine.dt *= 0.5;
    Run run2 = run_grid(spec, state, L, t_grid, fine, cfg);
    SurvivalSeries s2 = make_survival(t_grid, run2.overlap, "oracle_survival");
    out.survival_change = relative_sup_change(out.survival.w, s2.w);
    out.current_change = relative_sup_change(run.current, run2.current);
  }
  return out;
}

}  // namespace decay_povm
