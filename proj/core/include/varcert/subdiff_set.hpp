#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/vector_ops.hpp"

namespace varcert {

/// Closed interval; bounds may be infinite.
struct Interval {
  double lo;
  double hi;
};

/// Exact finite representation of a subdifferential value ∂φ(x).
class SubdiffSet {
 public:
  enum class Kind { kEmpty, kPoints, kIntervals, kBox, kPolyhedral };

  static SubdiffSet empty(std::size_t n);
  static SubdiffSet point(Vec p);
  static SubdiffSet points(std::vector<Vec> pts);
  /// One-dimensional finite union of closed intervals. Overlapping pieces
  /// are merged so the stored intervals are ordered and disjoint.
  static SubdiffSet intervals(std::vector<Interval> pieces);
  static SubdiffSet interval(double lo, double hi) { return intervals({{lo, hi}}); }
  static SubdiffSet whole_line();
  /// Product of intervals (separable models like ‖x‖₁).
  static SubdiffSet box(Vec lo, Vec hi);
  /// Convex hull of finitely many generators.
  static SubdiffSet polyhedral(std::vector<Vec> generators);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool is_empty() const;

  const std::vector<Vec>& point_list() const { return points_; }
  const std::vector<Interval>& interval_list() const { return intervals_; }
  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }
  const std::vector<Vec>& generators() const { return points_; }

  bool contains(VecView s, double tol = 1e-10) const;
  /// Euclidean distance from v to the set (+inf when empty).
  double distance(VecView v) const;

  /// Representative members near `center`: interval endpoints, midpoints and
  /// four interior fractions (after clipping to the radius), point-set
  /// members, box corners and center, polyhedral generators, centroid and
  /// pairwise midpoints. Callers apply the exact ball filter.
  std::vector<Vec> enumerate(VecView center, double radius, std::uint64_t seed = 0) const;

  /// {s + shift : s ∈ set}. For the 1-D interval kind the shift is scalar.
  SubdiffSet translated(VecView shift) const;

  /// min over members s of ⟨s, w⟩; +∞ for the empty set, −∞ if unbounded.
  double min_pairing(VecView w) const;

  /// Union of two one-dimensional sets (intervals or points).
  static SubdiffSet unite_1d(const SubdiffSet& a, const SubdiffSet& b);

 private:
  Kind kind_ = Kind::kEmpty;
  std::size_t dim_ = 0;
  std::vector<Vec> points_;  // points or generators
  std::vector<Interval> intervals_;
  Vec lo_, hi_;
};

void to_json(nlohmann::json& j, const SubdiffSet& s);
SubdiffSet subdiff_set_from_json(const nlohmann::json& j, std::size_t dim);

/// JSON cannot carry ±∞; non-finite reals serialise as the strings
/// "inf", "-inf" or "nan".
nlohmann::json real_to_json(double v);
double real_from_json(const nlohmann::json& j);

}  // namespace varcert
