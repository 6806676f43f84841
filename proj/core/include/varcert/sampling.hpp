#pragma once

#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/function_model.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/sample_plan.hpp"

namespace varcert {

/// An element (x, x*) of gph ∂φ together with φ(x).
struct GraphSample {
  Vec x;
  Vec xstar;
  double fx = 0.0;

  bool operator==(const GraphSample&) const = default;
};

/// Localization U × V around (x̄, x̄*) with level ε:
/// U = B_{r1}(x̄), V = B_{r2}(x̄*) (dual norm), U_ε = {x ∈ U : φ(x) < φ(x̄) + ε}.
struct Window {
  Vec center_x;
  Vec center_xstar;
  double r1 = 1.0;
  double r2 = 1.0;
  double eps = std::numeric_limits<double>::infinity();

  Window() = default;
  Window(Vec x, Vec xstar, double r1_, double r2_, double eps_);

  void validate(std::size_t n) const;
  bool in_U(VecView x, const NormModel& m) const;
  bool in_V(VecView xstar, const NormModel& m) const;
  /// x ∈ U and φ(x) < fbar + ε, with fbar = φ(x̄).
  bool in_U_eps(VecView x, double fx, double fbar, const NormModel& m) const;
  /// Same center and level, both radii multiplied by factor.
  Window shrunk(double factor) const;
  /// Cube circumscribing U.
  Box u_box() const { return Box::around(center_x, r1); }
};

void to_json(nlohmann::json& j, const Window& w);
void from_json(const nlohmann::json& j, Window& w);
void to_json(nlohmann::json& j, const GraphSample& s);

struct SampleOptions {
  /// Apply the φ-attentive level filter; otherwise sample (U × V) ∩ gph ∂φ.
  bool attentive = true;
};

/// Graph samples of φ over the probe points of `plan` (plus x̄) lying in the
/// window. Subgradients are enumerated from the exact oracle.
std::vector<GraphSample> graph_samples(const FunctionModel& phi, const Window& w,
                                       const SamplePlan& plan, const NormModel& m,
                                       SampleOptions opts = {});
std::vector<GraphSample> graph_samples(const FunctionModel& phi, const Window& w,
                                       const SamplePlan& plan);

/// Probe points inside U (plus x̄ itself) where φ is finite.
std::vector<Vec> window_points(const FunctionModel& phi, const Window& w, const SamplePlan& plan,
                               const NormModel& m);

}  // namespace varcert
