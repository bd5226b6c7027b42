#pragma once

#include <complex>
#include <string>
#include <vector>

#include "decay_povm/potential.hpp"

namespace decay_povm {

// How the region-I Gaussian is projected on the half-line modes sin(kr).
enum class OverlapModel {
  kSineProjected,  // exact sine transform: direct term minus the mirror term at -k
  kOneSided,       // direct term only
};

struct StateComponent {
  double k = 0.0;
  std::complex<double> weight{1.0, 0.0};
};

// One or two Gaussian momentum components of common width sigma centered at r = a/2,
// each of the form exp(-(r-c)^2 / (4 delta^2) + i k_j (r - c)), sigma = 1 / (sqrt(2) delta).
// Weights are rescaled so that the state has unit norm.
class InitialState {
 public:
  InitialState(std::vector<StateComponent> components, double sigma, double center,
               OverlapModel overlap = OverlapModel::kSineProjected);

  const std::vector<StateComponent>& components() const { return components_; }
  double sigma() const { return sigma_; }
  double delta() const;
  double center() const { return center_; }
  OverlapModel overlap() const { return overlap_; }
  double k_mean() const;
  // exp(-a^2 / (16 delta^2)) with a = 2 * center
  double leakage() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Momentum profile g_j(k) of component j, unit peak height, without normalization constants.
  std::complex<double> profile(std::size_t j, double k) const;
  // Weighted sum over components.
  std::complex<double> profile(double k) const;

 private:
  std::vector<StateComponent> components_;
  double sigma_;
  double center_;
  OverlapModel overlap_;
  std::vector<std::string> warnings_;
};

InitialState make_gaussian_state(const PotentialSpec& spec, double k0, double sigma,
                                 OverlapModel overlap = OverlapModel::kSineProjected);
InitialState make_two_gaussian_state(const PotentialSpec& spec, double k1, double k2, double sigma,
                                     OverlapModel overlap = OverlapModel::kSineProjected);

const char* to_string(OverlapModel m);
OverlapModel overlap_from_string(const std::string& s);

}  // namespace decay_povm
