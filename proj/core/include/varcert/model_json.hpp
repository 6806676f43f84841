#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "varcert/function_model.hpp"

namespace varcert {

/// Piecewise-quadratic model document:
///
///   {"dim": n,
///    "convex": false,                       (optional)
///    "pieces": [{"region": {"lo": [...], "hi": [...]},
///                "formula": {"quadratic": Q, "linear": [...], "constant": c}}
///               | {"region": ..., "value": "+inf"}],
///    "subdiff": [{"at": [...], "set": <subdifferential set>}]}
///
/// A piece evaluates to ½xᵀQx + ⟨b,x⟩ + c on its closed region (Q is a number,
/// meaning qI, or a row-major n×n array). φ is the minimum over the pieces
/// whose region contains x, and +inf where none does.
///
/// Subdifferential: explicit "subdiff" entries win. Otherwise a point inside
/// one piece gets its gradient; in one dimension a point between a left
/// gradient a and a right gradient b gets [a, b] if a <= b and {a, b}
/// otherwise (a missing side contributes a half-line). In n dimensions tied
/// pieces give the hull of their gradients for convex models and the point
/// set of gradients otherwise.
FunctionModel model_from_json(const nlohmann::json& doc, const std::string& name = "json_model");
FunctionModel model_from_file(const std::string& path);

/// "gallery:<name>[?k=v,...]" or a path to a model document.
FunctionModel resolve_model(const std::string& spec);

}  // namespace varcert
