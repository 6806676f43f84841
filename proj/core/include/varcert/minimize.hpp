#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/sample_plan.hpp"
#include "varcert/vector_ops.hpp"

namespace varcert {

struct MinimizeOptions {
  double value_tol = 1e-8;
  /// Refined points closer than this (max-abs) merge into one minimizer.
  double merge_tol = 1e-6;
  std::size_t max_local_candidates = 24;
  std::size_t max_tied_candidates = 256;
  double min_step = 1e-10;
  std::size_t max_iterations = 200000;
};

struct EnvelopeDiagnostics {
  double grid_stage_min = 0.0;
  std::size_t grid_points = 0;
  std::size_t candidates = 0;
  std::size_t refine_iterations = 0;
  bool converged = true;
  /// Some minimizer sits on the search box boundary.
  bool boundary_hit = false;
  /// The minimum kept decreasing as the box was doubled.
  bool unbounded_suspected = false;
};

/// Minimum value and the set of (merged) points attaining it within
/// value_tol. value is +inf when the objective is +inf on every probe and
/// −inf when unboundedness was detected.
struct EnvelopeResult {
  double value = 0.0;
  std::vector<Vec> minimizers;
  EnvelopeDiagnostics diagnostics;

  double cluster_diameter() const;
  bool single_valued(double cluster_tol) const;
};

void to_json(nlohmann::json& j, const EnvelopeResult& r);

/// Staged global search on plan.box: evaluate every plan point and the
/// extra points inside the box, keep the best discrete local minima and all
/// points within 10·value_tol of the incumbent, refine each by compass
/// search with step halving, then merge.
EnvelopeResult minimize_on_box(const std::function<double(VecView)>& objective, const SamplePlan& plan,
                               const std::vector<Vec>& extra_points = {}, const MinimizeOptions& opts = {});

}  // namespace varcert
