#include "decay_povm/state.hpp"

#include <cmath>
#include <sstream>

#include "decay_povm/errors.hpp"

namespace decay_povm {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

InitialState::InitialState(std::vector<StateComponent> components, double sigma, double center,
                           OverlapModel overlap)
    : components_(std::move(components)), sigma_(sigma), center_(center), overlap_(overlap) {
  if (components_.empty() || components_.size() > 2)
    throw InvalidArgument("initial state: one or two components required");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw InvalidArgument("initial state: sigma must be positive");
  if (!(center_ > 0.0)) throw InvalidArgument("initial state: center must be positive");
  for (const StateComponent& c : components_) {
    if (!(c.k > 0.0) || !std::isfinite(c.k)) throw InvalidArgument("initial state: component k must be positive");
    const double ratio = sigma_ / c.k;
    if (ratio >= 0.2) throw InvalidArgument("initial state: sigma/k must be below 0.2");
    if (ratio > 0.1) {
      std::ostringstream os;
      os << "sigma/k = " << ratio << " exceeds 0.1 for component k = " << c.k;
      warnings_.push_back(os.str());
    }
  }
  double norm2 = 0.0;
  for (const StateComponent& ci : components_)
    for (const StateComponent& cj : components_) {
      const double dk = ci.k - cj.k;
      norm2 += (std::conj(ci.weight) * cj.weight).real() * std::exp(-dk * dk / (4.0 * sigma_ * sigma_));
    }
  if (!(norm2 > 0.0)) throw InvalidArgument("initial state: weights give a zero vector");
  for (StateComponent& c : components_) c.weight /= std::sqrt(norm2);
  if (leakage() > 1e-6) {
    std::ostringstream os;
    os << "wall leakage exp(-a^2/(16 delta^2)) = " << leakage() << " exceeds 1e-6";
    warnings_.push_back(os.str());
  }
}

double InitialState::delta() const { return 1.0 / (std::sqrt(2.0) * sigma_); }

double InitialState::k_mean() const {
  double s = 0.0;
  for (const StateComponent& c : components_) s += c.k;
  return s / components_.size();
}

double InitialState::leakage() const {
  const double a = 2.0 * center_;
  const double d = delta();
  return std::exp(-a * a / (16.0 * d * d));
}

std::complex<double> InitialState::profile(std::size_t j, double k) const {
  const double kj = components_.at(j).k;
  const double s2 = 2.0 * sigma_ * sigma_;
  const double dm = k - kj;
  std::complex<double> g = std::exp(-kI * k * center_) * std::exp(-dm * dm / s2);
  if (overlap_ == OverlapModel::kSineProjected) {
    const double dp = k + kj;
    g -= std::exp(kI * k * center_) * std::exp(-dp * dp / s2);
  }
  return g;
}

std::complex<double> InitialState::profile(double k) const {
  std::complex<double> g{0.0, 0.0};
  for (std::size_t j = 0; j < components_.size(); ++j) g += components_[j].weight * profile(j, k);
  return g;
}

InitialState make_gaussian_state(const PotentialSpec& spec, double k0, double sigma, OverlapModel overlap) {
  return InitialState({{k0, {1.0, 0.0}}}, sigma, 0.5 * spec.a(), overlap);
}

InitialState make_two_gaussian_state(const PotentialSpec& spec, double k1, double k2, double sigma,
                                     OverlapModel overlap) {
  const double w = 1.0 / std::sqrt(2.0);
  return InitialState({{k1, {w, 0.0}}, {k2, {w, 0.0}}}, sigma, 0.5 * spec.a(), overlap);
}

const char* to_string(OverlapModel m) {
  return m == OverlapModel::kSineProjected ? "sine" : "one_sided";
}

OverlapModel overlap_from_string(const std::string& s) {
  if (s == "sine") return OverlapModel::kSineProjected;
  if (s == "one_sided") return OverlapModel::kOneSided;
  throw InvalidArgument("unknown overlap model '" + s + "'");
}

}  // namespace decay_povm
