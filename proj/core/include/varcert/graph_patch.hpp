#pragma once

#include <array>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/subdiff_set.hpp"
#include "varcert/vector_ops.hpp"

namespace varcert {

using Dir2 = std::array<double, 2>;

/// Closed convex cone in the plane (x, x*) given as the polar of a finite
/// ray set: {v : ⟨v, d⟩ <= 0 for every d}. No rays means the whole plane.
struct PolarCone {
  std::vector<Dir2> rays;

  bool contains(Dir2 v, double tol = 1e-12) const;
  /// Conic generators; an empty list means the cone is {0}.
  std::vector<Dir2> generators() const;
  /// {z : (z, −w) in the cone}, an interval or empty.
  SubdiffSet slice(double w) const;
};

/// gph ∂φ is locally the graph of a C¹ map with Jacobian `hessian`
/// (row-major n×n).
struct SmoothPatch {
  std::size_t n = 1;
  Vec hessian;
};

/// One-dimensional patch: the tangent cone at the point is generated by
/// `tangent`, and `strata` lists the tangent generators of every graph
/// stratum whose closure contains the point.
struct CurvePatch {
  std::vector<Dir2> tangent;
  std::vector<std::vector<Dir2>> strata;

  /// Stratum of a smooth branch leaving the point along d.
  static std::vector<Dir2> branch(Dir2 d) { return {d, {-d[0], -d[1]}}; }
};

using GraphPatch = std::variant<SmoothPatch, CurvePatch>;

/// Regular normal cone N̂((x,x*); gph ∂φ). For smooth patches the cone is the
/// subspace {(−Hb, b)}, reported through its basis.
struct NormalCone {
  bool smooth = false;
  SmoothPatch subspace;  // smooth case
  PolarCone polar;       // one-dimensional nonsmooth case

  std::vector<Vec> generators() const;
};

NormalCone regular_normal_cone(const GraphPatch& patch);

/// {z : (z, −w) ∈ N̂}.
SubdiffSet combined_slice(const GraphPatch& patch, VecView w);
/// Union over N̂ and the normal cones of adjacent strata.
SubdiffSet limiting_slice(const GraphPatch& patch, VecView w);

/// Patch of the graph after a vertical shear (x, x*) ↦ (x, x* + s·x).
GraphPatch sheared(const GraphPatch& patch, double s);

void to_json(nlohmann::json& j, const NormalCone& c);

}  // namespace varcert
