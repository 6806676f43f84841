#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/vector_ops.hpp"

namespace varcert {

/// Axis-aligned closed box.
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec lo_, Vec hi_);
  static Box cube(std::size_t n, double lo, double hi);
  static Box around(VecView center, double radius);

  std::size_t dim() const { return lo.size(); }
  bool contains(VecView x, double slack = 0.0) const;
  Vec center() const;
  Vec clamp(VecView x) const;
  /// Box with the same center and every half-width multiplied by factor.
  Box scaled(double factor) const;
  double min_half_width() const;
};

/// Deterministic description of a sample stream: a tensor grid with
/// grid_per_axis points per axis (endpoints included), followed by
/// qmc_points Halton points under a seeded Cranley-Patterson rotation.
struct SamplePlan {
  std::uint64_t seed = 1;
  std::size_t grid_per_axis = 101;
  std::size_t qmc_points = 0;
  Box box;

  SamplePlan() = default;
  SamplePlan(std::uint64_t seed_, std::size_t grid, std::size_t qmc, Box box_);

  std::size_t dim() const { return box.dim(); }

  std::vector<Vec> grid_points() const;
  std::vector<Vec> qmc_sequence() const;
  /// Grid points followed by QMC points.
  std::vector<Vec> points() const;

  /// Same seed and resolution, box replaced by the cube of the given radius.
  SamplePlan around(VecView center, double radius) const;
  SamplePlan with_box(Box b) const;

  void validate() const;
};

/// Largest tensor grid any plan may request.
inline constexpr std::size_t kMaxGridPoints = 4'000'000;

/// Evenly spaced values on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

void to_json(nlohmann::json& j, const Box& b);
void from_json(const nlohmann::json& j, Box& b);
void to_json(nlohmann::json& j, const SamplePlan& p);
void from_json(const nlohmann::json& j, SamplePlan& p);

}  // namespace varcert
