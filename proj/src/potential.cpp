#include "decay_povm/potential.hpp"

#include <algorithm>
#include <cmath>

#include "decay_povm/errors.hpp"

namespace decay_povm {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

PotentialSpec::PotentialSpec(double a, double b, double mass, std::vector<Segment> segments,
                             std::vector<DeltaSpike> deltas)
    : a_(a), b_(b), mass_(mass), segments_(std::move(segments)), deltas_(std::move(deltas)) {
  if (!finite(a_) || !finite(b_) || !finite(mass_))
    throw InvalidArgument("potential: a, b and mass must be finite");
  if (a_ <= 0.0) throw InvalidArgument("potential: a must be positive");
  if (mass_ <= 0.0) throw InvalidArgument("potential: mass must be positive");
  if (b_ < a_) throw InvalidArgument("potential: b must not be smaller than a");
  if (b_ == a_ && deltas_.empty())
    throw InvalidArgument("potential: a < b required unless the barrier is a delta spike");

  if (!segments_.empty()) {
    if (segments_.front().x0 != a_) throw InvalidArgument("potential: first segment must start at a");
    if (segments_.back().x1 != b_) throw InvalidArgument("potential: last segment must end at b");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const Segment& s = segments_[i];
      if (!finite(s.x0) || !finite(s.x1) || !finite(s.V))
        throw InvalidArgument("potential: non-finite segment entry");
      if (!(s.x1 > s.x0)) throw InvalidArgument("potential: segment boundaries must increase");
      if (s.V < 0.0) throw InvalidArgument("potential: negative segment value");
      if (i > 0 && segments_[i - 1].x1 != s.x0)
        throw InvalidArgument("potential: segments leave a gap or overlap");
    }
  }
  for (const DeltaSpike& dsp : deltas_) {
    if (!finite(dsp.x) || !finite(dsp.kappa)) throw InvalidArgument("potential: non-finite delta");
    if (dsp.x < a_ || dsp.x > b_) throw InvalidArgument("potential: delta outside [a, b]");
    if (dsp.kappa <= 0.0) throw InvalidArgument("potential: delta strength must be positive");
  }
  std::stable_sort(deltas_.begin(), deltas_.end(),
                   [](const DeltaSpike& l, const DeltaSpike& r) { return l.x < r.x; });
}

double PotentialSpec::value(double r) const {
  if (r < a_ || r > b_) return 0.0;
  for (const Segment& s : segments_)
    if (r >= s.x0 && r <= s.x1) return s.V;
  return 0.0;
}

double PotentialSpec::max_segment_height() const {
  double v = 0.0;
  for (const Segment& s : segments_) v = std::max(v, s.V);
  return v;
}

bool PotentialSpec::has_barrier() const {
  return max_segment_height() > 0.0 || !deltas_.empty();
}

bool PotentialSpec::is_symmetric(double rel_tol) const {
  const double c2 = a_ + b_;
  const double tol = rel_tol * std::max(1.0, std::abs(b_));
  const std::size_t ns = segments_.size();
  for (std::size_t i = 0; i < ns; ++i) {
    const Segment& s = segments_[i];
    const Segment& m = segments_[ns - 1 - i];
    if (std::abs((c2 - s.x1) - m.x0) > tol || std::abs((c2 - s.x0) - m.x1) > tol) return false;
    if (std::abs(s.V - m.V) > rel_tol * std::max(1.0, std::abs(s.V))) return false;
  }
  const std::size_t nd = deltas_.size();
  for (std::size_t i = 0; i < nd; ++i) {
    const DeltaSpike& p = deltas_[i];
    const DeltaSpike& m = deltas_[nd - 1 - i];
    if (std::abs((c2 - p.x) - m.x) > tol) return false;
    if (std::abs(p.kappa - m.kappa) > rel_tol * std::max(1.0, p.kappa)) return false;
  }
  return true;
}

double PotentialSpec::characteristic_k() const {
  double k = std::sqrt(2.0 * mass_ * max_segment_height());
  for (const DeltaSpike& dsp : deltas_) k = std::max(k, dsp.kappa);
  return k;
}

PotentialSpec parse_potential(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidArgument("potential document must be a JSON object");
  for (const char* key : {"a", "b", "mass", "segments", "deltas"})
    if (!doc.contains(key)) throw InvalidArgument(std::string("potential document lacks key '") + key + "'");
  try {
    std::vector<Segment> segs;
    for (const auto& s : doc.at("segments")) {
      segs.push_back({s.at("x0").get<double>(), s.at("x1").get<double>(), s.at("V").get<double>()});
    }
    std::vector<DeltaSpike> dels;
    for (const auto& p : doc.at("deltas")) {
      dels.push_back({p.at("x").get<double>(), p.at("kappa").get<double>()});
    }
    return PotentialSpec(doc.at("a").get<double>(), doc.at("b").get<double>(),
                         doc.at("mass").get<double>(), std::move(segs), std::move(dels));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed potential document: ") + e.what());
  }
}

PotentialSpec parse_potential(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("potential document is not valid JSON: ") + e.what());
  }
  return parse_potential(doc);
}

nlohmann::json to_json(const PotentialSpec& spec) {
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& s : spec.segments()) segs.push_back({{"x0", s.x0}, {"x1", s.x1}, {"V", s.V}});
  nlohmann::json dels = nlohmann::json::array();
  for (const DeltaSpike& p : spec.deltas()) dels.push_back({{"x", p.x}, {"kappa", p.kappa}});
  return {{"a", spec.a()}, {"b", spec.b()}, {"mass", spec.mass()}, {"segments", segs}, {"deltas", dels}};
}

std::string serialize(const PotentialSpec& spec) { return to_json(spec).dump(); }

PotentialSpec make_square_barrier(double a, double d, double V0, double M) {
  if (!(a > 0.0) || !(d > 0.0) || !(V0 > 0.0) || !(M > 0.0))
    throw InvalidArgument("make_square_barrier: a, d, V0 and M must be positive");
  return PotentialSpec(a, a + d, M, {{a, a + d, V0}}, {});
}

PotentialSpec make_delta_barrier(double a, double kappa, double M) {
  if (!(a > 0.0) || !(kappa > 0.0) || !(M > 0.0))
    throw InvalidArgument("make_delta_barrier: a, kappa and M must be positive");
  return PotentialSpec(a, a, M, {}, {{a, kappa}});
}

PotentialSpec make_double_step(double a, double b, double c, double V1, double V2, double M) {
  if (!(a > 0.0) || !(b > a) || !(c > b) || !(V1 > 0.0) || !(V2 > 0.0) || !(M > 0.0))
    throw InvalidArgument("make_double_step: need 0 < a < b < c and positive V1, V2, M");
  return PotentialSpec(a, c, M, {{a, b, V1}, {b, c, V2}}, {});
}

PotentialSpec make_free(double a, double b, double M) { return PotentialSpec(a, b, M, {}, {}); }

}  // namespace decay_povm
