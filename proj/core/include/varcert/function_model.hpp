#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/extended_real.hpp"
#include "varcert/graph_patch.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/subdiff_set.hpp"
#include "varcert/vector_ops.hpp"

namespace varcert {

struct ProxRegularity {
  double r = 0.0;
  double eps = 0.0;
};

/// φ(x) >= alpha‖x − anchor‖² + beta everywhere.
struct ProxBound {
  double alpha = 0.0;
  double beta = 0.0;
  Vec anchor;
};

struct ModelMeta {
  bool is_convex = false;
  std::optional<ProxRegularity> prox_regular;
  std::optional<ProxBound> prox_bounded;
  bool subdiff_continuous = false;
};

void to_json(nlohmann::json& j, const ModelMeta& m);

/// Extended-real-valued function on ℝⁿ with optional exact first- and
/// second-order information.
class FunctionModel {
 public:
  /// Returns +inf outside the domain.
  using EvalFn = std::function<double(VecView)>;
  using SubdiffFn = std::function<SubdiffSet(VecView)>;
  /// Closed-form proximal set for the Euclidean norm.
  using ProxFn = std::function<std::vector<Vec>(double lambda, VecView x)>;
  using PatchFn = std::function<GraphPatch(VecView x, VecView xstar)>;

  FunctionModel(std::string name, std::size_t n, EvalFn eval);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return n_; }

  double value(VecView x) const;
  ExtendedReal eval(VecView x) const { return ExtendedReal(value(x)); }

  bool has_subdiff() const { return static_cast<bool>(subdiff_); }
  SubdiffSet subdiff(VecView x) const;
  bool has_prox() const { return static_cast<bool>(prox_); }
  std::vector<Vec> prox(double lambda, VecView x) const;
  bool has_patch() const { return static_cast<bool>(patch_); }
  GraphPatch patch(VecView x, VecView xstar) const;

  const ModelMeta& meta() const { return meta_; }
  /// Points where φ or ∂φ changes form; sampled in addition to plan points.
  const std::vector<Vec>& breakpoints() const { return breakpoints_; }
  const nlohmann::json& params() const { return params_; }

  FunctionModel& with_subdiff(SubdiffFn f);
  FunctionModel& with_prox(ProxFn f);
  FunctionModel& with_patch(PatchFn f);
  FunctionModel& with_meta(ModelMeta m);
  FunctionModel& with_breakpoints(std::vector<Vec> pts);
  FunctionModel& with_params(nlohmann::json p);
  FunctionModel& with_name(std::string name);

 private:
  std::string name_;
  std::size_t n_;
  EvalFn eval_;
  SubdiffFn subdiff_;
  ProxFn prox_;
  PatchFn patch_;
  ModelMeta meta_;
  std::vector<Vec> breakpoints_;
  nlohmann::json params_ = nlohmann::json::object();
};

/// φ − ⟨x*, ·⟩, with subdifferential and graph patches shifted accordingly.
FunctionModel tilted(const FunctionModel& phi, VecView xstar);

/// ψ = φ − (σ/2)‖·‖² with ∂ψ = ∂φ − σJ.
FunctionModel quadratic_shift(const FunctionModel& phi, double sigma, const NormModel& m);

/// Plan points, the model's breakpoints, and axis offsets of each breakpoint
/// by ±{1e-2, 1e-3, 1e-5}, restricted to the plan box, sorted and
/// deduplicated.
std::vector<Vec> probe_points(const FunctionModel& phi, const SamplePlan& plan);

}  // namespace varcert
