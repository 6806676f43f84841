#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/function_model.hpp"

namespace varcert {

/// Names accepted by gallery_lookup.
const std::vector<std::string>& gallery_names();

/// Builds a gallery model. `params` is an object of numeric parameters:
///   staircase                 (none)
///   zero_one                  (none)
///   l1_weighted_square        m   grid size of [0,1] (default 512)
///   abs                       n   dimension (default 1)
///   quadratic                 alpha (default 1), n (default 1)
///   huber_source              delta (default 0.5), n (default 1)
FunctionModel gallery_lookup(const std::string& name,
                             const nlohmann::json& params = nlohmann::json::object());

/// Parses "name" or "name?k=v,k=v" into a name and a parameter object.
std::pair<std::string, nlohmann::json> parse_gallery_spec(const std::string& spec);

namespace models {

/// φ(x) = min{((k+1)/k)|x| − 1/(k(k+1)), 1/k} on 1/(k+1) <= |x| <= 1/k,
/// φ(0) = 0, +inf outside [−1, 1].
FunctionModel staircase(int max_breakpoint_k = 200);
/// 0 at the origin, 1 elsewhere.
FunctionModel zero_one();
/// Σ xᵢ² / m: the midpoint rule for ∫₀¹ x(t)² dt.
FunctionModel l1_weighted_square(std::size_t m);
/// ‖x‖₁.
FunctionModel abs_value(std::size_t n);
/// (α/2)‖x‖₂².
FunctionModel quadratic(double alpha, std::size_t n);
/// Separable Huber function: t²/(2δ) for |t| <= δ, |t| − δ/2 otherwise.
FunctionModel huber(double delta, std::size_t n);
/// Indicator of [lo, hi] in one dimension.
FunctionModel indicator_interval(double lo, double hi);
/// −x⁴ in one dimension (not prox-bounded).
FunctionModel negative_quartic();
/// ‖x‖_p² for the given norm.
FunctionModel norm_power(const NormModel& m);

/// Breakpoints of the staircase on (0, 1]: 1/(k+1) and (k+2)/(k+1)².
double staircase_kink_convex(int k);
double staircase_kink_concave(int k);

}  // namespace models

/// Weighted ℓ¹ norm matching l1_weighted_square(m): ‖x‖ = Σ |xᵢ| / m.
NormFn l1_grid_norm(std::size_t m);

}  // namespace varcert
