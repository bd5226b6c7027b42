#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace decay_povm {

struct Segment {
  double x0;
  double x1;
  double V;
  bool operator==(const Segment&) const = default;
};

struct DeltaSpike {
  double x;
  double kappa;  // V = (kappa / M) * delta(r - x)
  bool operator==(const DeltaSpike&) const = default;
};

// Piecewise-constant repulsive barrier on [a, b] plus optional delta spikes, zero elsewhere.
// An empty segment list means V = 0 on [a, b]. Immutable after construction.
class PotentialSpec {
 public:
  PotentialSpec(double a, double b, double mass, std::vector<Segment> segments,
                std::vector<DeltaSpike> deltas);

  double a() const { return a_; }
  double b() const { return b_; }
  double width() const { return b_ - a_; }
  double mass() const { return mass_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<DeltaSpike>& deltas() const { return deltas_; }

  // Value of the piecewise-constant part; delta spikes are not included.
  double value(double r) const;
  double max_segment_height() const;
  bool has_barrier() const;
  // Mirror symmetry about the barrier center (a + b) / 2.
  bool is_symmetric(double rel_tol = 1e-12) const;
  // Wavenumber scale of the barrier: sqrt(2 M Vmax) combined with delta strengths.
  double characteristic_k() const;

  bool operator==(const PotentialSpec&) const = default;

 private:
  double a_;
  double b_;
  double mass_;
  std::vector<Segment> segments_;
  std::vector<DeltaSpike> deltas_;
};

PotentialSpec parse_potential(const nlohmann::json& doc);
PotentialSpec parse_potential(const std::string& text);
nlohmann::json to_json(const PotentialSpec& spec);
std::string serialize(const PotentialSpec& spec);

PotentialSpec make_square_barrier(double a, double d, double V0, double M);
PotentialSpec make_delta_barrier(double a, double kappa, double M);
// Two adjacent steps [a, b) at V1 and [b, c] at V2.
PotentialSpec make_double_step(double a, double b, double c, double V1, double V2, double M);
PotentialSpec make_free(double a, double b, double M);

}  // namespace decay_povm
