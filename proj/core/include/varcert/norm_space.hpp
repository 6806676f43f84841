#pragma once

#include <cstddef>
#include <functional>

#include <nlohmann/json.hpp>

#include "varcert/sample_plan.hpp"
#include "varcert/vector_ops.hpp"

namespace varcert {

/// Weighted ℓ^p geometry on ℝⁿ, 1 < p < ∞:
///   ‖x‖ = (Σ wᵢ|xᵢ|^p)^(1/p).
/// Covectors pair with vectors through the plain Euclidean sum, so the dual
/// norm is weighted ℓ^q with weights wᵢ^(1−q).
class NormModel {
 public:
  NormModel(double p, std::size_t n, Vec weights = {});
  static NormModel euclidean(std::size_t n) { return NormModel(2.0, n); }

  double p() const { return p_; }
  /// Conjugate exponent p/(p−1).
  double q() const { return q_; }
  std::size_t dim() const { return n_; }
  const Vec& weights() const { return weights_; }
  bool unweighted() const { return unweighted_; }
  /// p = 2 with unit weights: J is the identity and Hilbert identities apply.
  bool is_euclidean() const { return p_ == 2.0 && unweighted_; }

  double norm(VecView x) const;
  double dual_norm(VecView xstar) const;

  /// The unique J(x) with ⟨J(x),x⟩ = ‖x‖² and ‖J(x)‖_* = ‖x‖.
  Vec duality_map(VecView x) const;
  /// Duality map of the dual space; inverts duality_map.
  Vec inverse_duality_map(VecView xstar) const;

  /// Λ(u,x) = ‖u‖² − 2⟨J(u),x⟩ + ‖x‖².
  double lyapunov(VecView u, VecView x) const;

  double distance(VecView a, VecView b) const { return norm(sub(a, b)); }
  double dual_distance(VecView a, VecView b) const { return dual_norm(sub(a, b)); }
  /// ‖a−b‖². Agrees bitwise with lyapunov(a, b) in the Euclidean case.
  double squared_distance(VecView a, VecView b) const;

 private:
  double p_;
  double q_;
  std::size_t n_;
  Vec weights_;
  Vec dual_weights_;
  bool unweighted_;
};

/// Any norm on ℝⁿ; used where the geometry has no single-valued duality map
/// (for instance the weighted ℓ¹ norm of the discretized L¹ example).
using NormFn = std::function<double(VecView)>;

NormFn as_norm_fn(const NormModel& m);
/// ‖x‖ = Σ wᵢ|xᵢ|.
NormFn weighted_l1_norm(Vec weights);

struct ModulusEstimate {
  double value = 0.0;  // min ⟨J(x)−J(y), x−y⟩ / ‖x−y‖² over the sampled pairs
  Vec argmin_x;
  Vec argmin_y;
  std::size_t pairs = 0;
};

/// Empirical strong-monotonicity constant of J. Pairs are drawn uniformly in
/// the plan box; the count is max(plan.qmc_points, 100).
ModulusEstimate estimate_strong_mono_modulus(const NormModel& m, const SamplePlan& plan);

void to_json(nlohmann::json& j, const NormModel& m);
NormModel norm_model_from_json(const nlohmann::json& j);

}  // namespace varcert
