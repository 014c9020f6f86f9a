#ifndef OSC_OSCILLATION_HPP
#define OSC_OSCILLATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "osc/error.hpp"
#include "osc/geom.hpp"

namespace osc {

/// Two parallel lines P and Q.  The lines have direction `angle`; with unit
/// normal n = (-sin angle, cos angle) they sit at n.p = center -+ gap/2.
class ParallelLinePair {
public:
  ParallelLinePair() = default;
  ParallelLinePair(double angle, double center, double gap) : angle_(angle), center_(center), gap_(gap) {
    if (!(gap > 0.0) || !std::isfinite(gap)) throw PreconditionError("line pair gap must be positive");
    if (!std::isfinite(angle) || !std::isfinite(center)) throw PreconditionError("line pair is not finite");
    // Reducing the angle mod pi flips the normal for odd multiples.
    const double k = std::floor(angle_ / std::numbers::pi);
    angle_ -= k * std::numbers::pi;
    if (angle_ >= std::numbers::pi) angle_ -= std::numbers::pi;
    if (static_cast<long long>(k) % 2 != 0) center_ = -center_;
    normal_ = {-std::sin(angle_), std::cos(angle_)};
  }

  double angle() const { return angle_; }
  double center() const { return center_; }
  double gap() const { return gap_; }
  Point normal() const { return normal_; }

  /// Normalized coordinate: P maps to -3, Q to +3.
  double normalized(Point p) const { return 6.0 * (dot(normal_, p) - center_) / gap_; }

  friend bool operator==(const ParallelLinePair&, const ParallelLinePair&) = default;

private:
  double angle_ = 0.0;
  double center_ = 0.0;
  double gap_ = 1.0;
  Point normal_{0.0, 1.0};
};

/// The clamped piecewise-linear profile g on the normalized coordinate.
inline double band_profile(double x1) {
  if (x1 <= -3.0) return -1.0;
  if (x1 <= -1.0) return 0.5 * (x1 + 1.0);
  if (x1 <= 1.0) return 0.0;
  if (x1 <= 3.0) return 0.5 * (x1 - 1.0);
  return 1.0;
}

inline double band_value(const ParallelLinePair& pair, Point p) { return band_profile(pair.normalized(p)); }

/// Best chain value over the given sample values:
/// best[j] = max(0, max_{i<j} best[i] - v_i v_j); result = max_j best[j].
inline double oscillation_of_profile(std::span<const double> v) {
  std::vector<double> best(v.size(), 0.0);
  double result = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    double b = 0.0;
    for (std::size_t i = 0; i < j; ++i) b = std::max(b, best[i] + (-v[i] * v[j]));
    best[j] = b;
    result = std::max(result, b);
  }
  return result;
}

/// Exhaustive search over every subsequence with at most k_max+1 entries.
inline double oscillation_bruteforce(std::span<const double> profile, int k_max) {
  const std::size_t n = profile.size();
  if (n > 14) throw SizeError("brute-force oscillation limited to 14 samples");
  double best = 0.0;
  std::vector<std::size_t> idx;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    idx.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    if (idx.size() < 2 || static_cast<int>(idx.size()) > k_max + 1) continue;
    double s = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) s = s + (-profile[idx[k - 1]] * profile[idx[k]]);
    best = std::max(best, s);
  }
  return best;
}

/// Profile sample: arc-length position and band value.
struct ProfileSample {
  double s = 0.0;
  double v = 0.0;
};

/// Breakpoints of t -> g(path(t)): every vertex plus every interior point
/// where the normalized coordinate crosses -3, -1, 1 or 3.
inline std::vector<ProfileSample> band_profile_samples(const Polyline& path, const ParallelLinePair& pair) {
  const auto& pts = path.vertices();
  std::vector<ProfileSample> out;
  out.reserve(pts.size() * 3);
  double s = 0.0;
  double xa = pair.normalized(pts[0]);
  out.push_back({0.0, band_profile(xa)});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double len = dist(pts[i - 1], pts[i]);
    const double xb = pair.normalized(pts[i]);
    if (xa != xb) {
      const double lo = std::min(xa, xb), hi = std::max(xa, xb);
      double kinks[4] = {-3.0, -1.0, 1.0, 3.0};
      if (xb < xa) std::reverse(std::begin(kinks), std::end(kinks));
      for (double k : kinks)
        if (k > lo && k < hi) out.push_back({s + len * (k - xa) / (xb - xa), band_profile(k)});
    }
    s += len;
    out.push_back({s, band_profile(xb)});
    xa = xb;
  }
  return out;
}

/// Indices of the local extrema of a sample sequence (first and last kept;
/// plateaus keep one representative).  Interior points of monotone runs never
/// improve a chain.
inline std::vector<std::size_t> profile_extrema(const std::vector<ProfileSample>& prof) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (!keep.empty() && prof[keep.back()].v == prof[i].v) continue;
    while (keep.size() >= 2) {
      const double a = prof[keep[keep.size() - 2]].v;
      const double b = prof[keep.back()].v;
      const double c = prof[i].v;
      if ((a < b && b < c) || (a > b && b > c)) keep.pop_back();
      else break;
    }
    keep.push_back(i);
  }
  return keep;
}

inline double oscillation(const Polyline& path, const ParallelLinePair& pair) {
  const auto prof = band_profile_samples(path, pair);
  const auto keep = profile_extrema(prof);
  std::vector<double> v;
  v.reserve(keep.size());
  for (std::size_t k : keep) v.push_back(prof[k].v);
  return oscillation_of_profile(v);
}

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace detail

/// Truncated enumeration of line pairs with weights 2^-i, i = 1..N.
struct DirectionSchedule {
  std::vector<ParallelLinePair> pairs;
  std::vector<double> weights;
  BBox bbox;

  std::size_t size() const { return pairs.size(); }
};

/// Pair i (1-based) takes its angle, offset and gap from the radical
/// inverses of i in bases 2, 3 and 5 respectively.
inline DirectionSchedule make_schedule(int n, const BBox& bbox) {
  if (n < 1) throw PreconditionError("schedule size must be at least 1");
  if (bbox.degenerate()) throw PreconditionError("schedule bounding box is degenerate");
  DirectionSchedule sched;
  sched.bbox = bbox;
  const double diag = bbox.diagonal();
  const Point corners[4] = {{bbox.xmin, bbox.ymin}, {bbox.xmax, bbox.ymin}, {bbox.xmin, bbox.ymax}, {bbox.xmax, bbox.ymax}};
  double w = 1.0;
  for (int i = 1; i <= n; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    const double angle = std::numbers::pi * detail::radical_inverse(u, 2);
    const Point nrm{-std::sin(angle), std::cos(angle)};
    double lo = dot(nrm, corners[0]), hi = lo;
    for (Point c : corners) {
      lo = std::min(lo, dot(nrm, c));
      hi = std::max(hi, dot(nrm, c));
    }
    const double center = lo + detail::radical_inverse(u, 3) * (hi - lo);
    const double gap = diag * detail::radical_inverse(u, 5);
    w *= 0.5;
    sched.pairs.emplace_back(angle, center, gap);
    sched.weights.push_back(w);
  }
  return sched;
}

inline double total_oscillation(const Polyline& path, const DirectionSchedule& schedule) {
  double t = 0.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double o = oscillation(path, schedule.pairs[i]);
    t += schedule.weights[i] * (o / (1.0 + o));
  }
  return t;
}

/// Total oscillation of every prefix of one fixed path, answered from a
/// single precomputed chain table per pair.
class PrefixOscillation {
public:
  PrefixOscillation(const Polyline& path, const DirectionSchedule& schedule)
      : weights_(schedule.weights), length_(path.length()) {
    tables_.reserve(schedule.size());
    for (const auto& pair : schedule.pairs) {
      Table t;
      t.profile = band_profile_samples(path, pair);
      const auto keep = profile_extrema(t.profile);
      double running = 0.0;
      for (std::size_t j = 0; j < keep.size(); ++j) {
        const double vj = t.profile[keep[j]].v;
        double b = 0.0;
        for (std::size_t i = 0; i < j; ++i) b = std::max(b, t.best[i] + (-t.v[i] * vj));
        t.s.push_back(t.profile[keep[j]].s);
        t.v.push_back(vj);
        t.best.push_back(b);
        running = std::max(running, b);
        t.running_max.push_back(running);
      }
      tables_.push_back(std::move(t));
    }
  }

  double length() const { return length_; }

  /// Oscillation of the prefix ending at arc length s, for pair k.
  double prefix_oscillation(std::size_t k, double s) const {
    const Table& t = tables_[k];
    const double vq = t.value_at(s);
    // Extrema strictly before the query point.
    const auto end = static_cast<std::size_t>(std::lower_bound(t.s.begin(), t.s.end(), s) - t.s.begin());
    double o = end > 0 ? t.running_max[end - 1] : 0.0;
    for (std::size_t i = 0; i < end; ++i) o = std::max(o, t.best[i] + (-t.v[i] * vq));
    return o;
  }

  double prefix_total(double s) const {
    double total = 0.0;
    for (std::size_t k = 0; k < tables_.size(); ++k) {
      const double o = prefix_oscillation(k, s);
      total += weights_[k] * (o / (1.0 + o));
    }
    return total;
  }

private:
  struct Table {
    std::vector<ProfileSample> profile;
    std::vector<double> s, v, best, running_max;

    double value_at(double q) const {
      if (q <= profile.front().s) return profile.front().v;
      if (q >= profile.back().s) return profile.back().v;
      auto it = std::upper_bound(profile.begin(), profile.end(), q,
                                 [](double x, const ProfileSample& p) { return x < p.s; });
      const ProfileSample& b = *it;
      const ProfileSample& a = *(it - 1);
      if (b.s == a.s) return b.v;
      return a.v + (b.v - a.v) * ((q - a.s) / (b.s - a.s));
    }
  };

  std::vector<double> weights_;
  std::vector<Table> tables_;
  double length_ = 0.0;
};

/// A path together with its cumulative total oscillation, so it can be read
/// at any oscillation value.  `breaks[i]` is the cumulative value at vertex i.
class ParamPath {
public:
  ParamPath() = default;

  static ParamPath constant(Point p) {
    ParamPath pp;
    pp.geometry_ = Polyline({p});
    pp.arclen_ = {0.0};
    pp.breaks_ = {0.0};
    pp.knots_ = {{0.0, 0.0}};
    return pp;
  }

  ParamPath(Polyline geometry, const DirectionSchedule& schedule, int samples)
      : geometry_(std::move(geometry)) {
    prefix_ = std::make_shared<PrefixOscillation>(geometry_, schedule);
    arclen_ = geometry_.arclengths();
    const double len = arclen_.back();
    for (double s : arclen_) knots_.emplace_back(s, 0.0);
    for (int k = 1; k < samples; ++k) knots_.emplace_back(len * k / samples, 0.0);
    std::sort(knots_.begin(), knots_.end());
    for (auto& [s, t] : knots_) t = prefix_->prefix_total(s);
    // Cumulative T is nondecreasing; clean up rounding so bracketing is valid.
    for (std::size_t i = 1; i < knots_.size(); ++i) knots_[i].second = std::max(knots_[i].second, knots_[i - 1].second);
    for (double s : arclen_) breaks_.push_back(cumulative_at_knot(s));
    total_ = knots_.back().second;
  }

  const Polyline& geometry() const { return geometry_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  double total() const { return total_; }
  double length() const { return arclen_.back(); }
  bool is_constant() const { return prefix_ == nullptr; }

  /// T of the prefix ending at arc length s.
  double prefix_T(double s) const { return prefix_ ? prefix_->prefix_total(s) : 0.0; }

  /// Arc length of the first point whose prefix reaches oscillation tau.
  double arclength_at_T(double tau) const {
    if (!prefix_ || tau <= 0.0) return 0.0;
    if (tau >= total_) return length();
    auto it = std::lower_bound(knots_.begin(), knots_.end(), tau,
                               [](const std::pair<double, double>& k, double x) { return k.second < x; });
    if (it == knots_.begin()) return it->first;
    double a = (it - 1)->first, b = it->first;
    double fa = (it - 1)->second - tau, fb = it->second - tau;
    if (fb == 0.0) {
      // Walk back to the first knot on this plateau.
      while (it != knots_.begin() && (it - 1)->second == tau) --it;
      if (it == knots_.begin()) return it->first;
      a = (it - 1)->first;
      b = it->first;
      fa = (it - 1)->second - tau;
      fb = 0.0;
    }
    // Illinois regula falsi on [a, b] with fa < 0 <= fb.
    int side = 0;
    for (int iter = 0; iter < 80 && b - a > 1e-15 * std::max(1.0, length()); ++iter) {
      double c = (fb - fa) != 0.0 ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
      if (!(c > a && c < b)) c = 0.5 * (a + b);
      const double fc = prefix_->prefix_total(c) - tau;
      if (std::fabs(fc) <= 1e-15) {
        // Keep the bracket but move toward the first crossing.
        b = c;
        fb = fc;
        if (fc >= 0.0) continue;
      }
      if (fc >= 0.0) {
        b = c;
        fb = fc;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = c;
        fa = fc;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    return b;
  }

  /// Point reached when the cumulative oscillation equals tau.  tau <= 0 gives
  /// the start and tau >= total() the end, exactly.
  Point at_T(double tau) const {
    if (!prefix_ || tau <= 0.0) return geometry_.front();
    if (tau >= total_) return geometry_.back();
    return geometry_.at_arclength(arclength_at_T(tau));
  }

  /// Unit-interval parameterization proportional to total oscillation.
  Point at_unit(double u) const { return at_T(u * total_); }

private:
  double cumulative_at_knot(double s) const {
    auto it = std::lower_bound(knots_.begin(), knots_.end(), std::make_pair(s, -1.0));
    return it == knots_.end() ? knots_.back().second : it->second;
  }

  Polyline geometry_;
  std::shared_ptr<const PrefixOscillation> prefix_;
  std::vector<double> arclen_;
  std::vector<double> breaks_;
  std::vector<std::pair<double, double>> knots_;
  double total_ = 0.0;
};

inline ParamPath parameterize_by_T(const Polyline& path, const DirectionSchedule& schedule, int samples = 256) {
  if (path.is_constant()) throw DegenerateInputError("cannot parameterize a constant path by oscillation");
  if (samples < 1) throw PreconditionError("sample count must be positive");
  return ParamPath(path, schedule, samples);
}

}  // namespace osc

#endif  // OSC_OSCILLATION_HPP
