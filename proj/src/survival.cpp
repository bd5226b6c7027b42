#include "decay_povm/survival.hpp"

#include <cmath>
#include <numbers>

#include "decay_povm/coefficients.hpp"
#include "decay_povm/detection.hpp"
#include "decay_povm/errors.hpp"
#include "decay_povm/scattering.hpp"

namespace decay_povm {

SurvivalSeries make_survival(std::vector<double> t, std::vector<std::complex<double>> amplitude,
                             std::string method) {
  SurvivalSeries s;
  s.t = std::move(t);
  s.amplitude = std::move(amplitude);
  s.method = std::move(method);
  s.w.resize(s.amplitude.size());
  for (std::size_t i = 0; i < s.w.size(); ++i) s.w[i] = std::norm(s.amplitude[i]);
  if (s.t.size() >= 2) {
    s.minus_wdot = derivative(s.t, s.w);
    for (double& v : s.minus_wdot) v = -v;
  } else {
    s.minus_wdot.assign(s.t.size(), 0.0);
  }
  return s;
}

double spectral_density(const PotentialSpec& spec, const InitialState& state, double k) {
  const HalfLineMode hm = half_line_mode(spec, k);
  return std::norm(hm.tau) * std::norm(state.profile(k)) / (std::sqrt(std::numbers::pi) * state.sigma());
}

SurvivalSeries survival_quadrature(const PotentialSpec& spec, const InitialState& state,
                                   const std::vector<double>& t_grid, const QuadratureConfig& qcfg,
                                   QuadratureReport* report) {
  if (t_grid.empty()) throw InvalidArgument("survival: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw InvalidArgument("survival: times must be non-negative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("survival: times must increase");
  }
  auto f = [&](double k) { return std::complex<double>(spectral_density(spec, state, k), 0.0); };
  const auto windows = state_windows(state, qcfg);
  QuadratureReport rep;
  auto amp = phase_integral(f, windows, t_grid, spec.mass(), qcfg, &rep);
  if (report) *report = rep;
  return make_survival(t_grid, std::move(amp), "survival");
}

double beats_survival_value(const BeatsChannel& c1, const BeatsChannel& c2, double M, double t) {
  const double pi = std::numbers::pi;
  const double phase = (pi + c1.theta) * c1.k * t / (M * c1.beta) - (pi + c2.theta) * c2.k * t / (M * c2.beta) -
                       (c1.k * c1.k - c2.k * c2.k) * t / (2.0 * M);
  return c1.weight2 * c1.weight2 * std::exp(-c1.Gamma * t) + c2.weight2 * c2.weight2 * std::exp(-c2.Gamma * t) +
         2.0 * c1.weight2 * c2.weight2 * std::exp(-std::sqrt(c1.Gamma * c2.Gamma) * t) * std::cos(phase);
}

SurvivalBeatsResult survival_beats(const PotentialSpec& spec, const InitialState& state,
                                   const std::vector<double>& t_grid) {
  const auto& comp = state.components();
  if (comp.size() != 2) throw PreconditionError("survival_beats: requires a two-component state");
  if (!(std::abs(comp[0].k - comp[1].k) > 3.0 * state.sigma()))
    throw PreconditionError("survival_beats: |k1 - k2| must exceed 3 sigma");
  if (t_grid.size() < 3) throw InvalidArgument("survival_beats: need at least three times");
  const double M = spec.mass();
  auto channel = [&](const StateComponent& c) {
    const BarrierCoefficients co = coefficients_at(spec, c.k);
    BeatsChannel ch;
    ch.weight2 = std::norm(c.weight);
    ch.Gamma = c.k * co.T2 / (M * co.beta);
    ch.k = c.k;
    ch.beta = co.beta;
    ch.theta = co.argR;
    return ch;
  };
  SurvivalBeatsResult out;
  out.channel1 = channel(comp[0]);
  out.channel2 = channel(comp[1]);
  std::vector<std::complex<double>> amp(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    amp[i] = std::sqrt(std::max(0.0, beats_survival_value(out.channel1, out.channel2, M, t_grid[i])));
  out.series = make_survival(t_grid, std::move(amp), "survival_beats");
  const auto& md = out.series.minus_wdot;
  out.min_minus_wdot = md.empty() ? 0.0 : md[0];
  bool open = false;
  for (std::size_t i = 0; i < md.size(); ++i) {
    out.min_minus_wdot = std::min(out.min_minus_wdot, md[i]);
    if (md[i] < 0.0 && !open) {
      out.negative_intervals.emplace_back(t_grid[i], t_grid[i]);
      open = true;
    } else if (md[i] < 0.0) {
      out.negative_intervals.back().second = t_grid[i];
    } else {
      open = false;
    }
  }
  return out;
}

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& w, double t_lo, double t_hi,
                        double period) {
  if (period > 0.0) {
    std::vector<double> mid, mean;
    for (double lo = t_lo; lo + period <= t_hi; lo += period) {
      double acc = 0.0, span = 0.0;
      for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i - 1] >= lo && t[i] <= lo + period) {
          acc += 0.5 * (w[i] + w[i - 1]) * (t[i] - t[i - 1]);
          span += t[i] - t[i - 1];
        }
      if (span > 0.5 * period && acc > 0.0) {
        mid.push_back(lo + 0.5 * period);
        mean.push_back(acc / span);
      }
    }
    if (mid.size() < 3) throw NumericalError("fit_decay_rate: fewer than three complete periods");
    DecayFit fit;
    fit.rate = -log_linear_fit(mid, mean).slope;
    fit.points = mid.size();
    fit.from_period_means = true;
    return fit;
  }
  std::vector<double> tt, ww;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_lo && t[i] <= t_hi && w[i] > 0.0) {
      tt.push_back(t[i]);
      ww.push_back(w[i]);
    }
  if (tt.size() < 2) throw NumericalError("fit_decay_rate: fewer than two usable samples");
  DecayFit fit;
  const auto peaks = find_peaks(ww);
  if (peaks.size() >= 3) {
    std::vector<double> pt, pw;
    for (auto i : peaks) {
      pt.push_back(tt[i]);
      pw.push_back(ww[i]);
    }
    fit.rate = -log_linear_fit(pt, pw).slope;
    fit.points = peaks.size();
    fit.from_peaks = true;
  } else {
    fit.rate = -log_linear_fit(tt, ww).slope;
    fit.points = tt.size();
  }
  return fit;
}

}  // namespace decay_povm
