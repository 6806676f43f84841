#include "varcert/graph_patch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varcert/errors.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Dir2 normalized(Dir2 d) {
  const double n = std::hypot(d[0], d[1]);
  if (n == 0.0) return d;
  return {d[0] / n, d[1] / n};
}

}  // namespace

bool PolarCone::contains(Dir2 v, double tol) const {
  for (const auto& d : rays) {
    const Dir2 u = normalized(d);
    if (u[0] * v[0] + u[1] * v[1] > tol) return false;
  }
  return true;
}

std::vector<Dir2> PolarCone::generators() const {
  std::vector<Dir2> candidates = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& d : rays) {
    const Dir2 u = normalized(d);
    candidates.push_back({-u[1], u[0]});
    candidates.push_back({u[1], -u[0]});
    candidates.push_back({-u[0], -u[1]});
  }
  std::vector<Dir2> out;
  for (const auto& c : candidates) {
    if (!contains(c, 1e-12)) continue;
    bool dup = false;
    for (const auto& o : out) dup = dup || (std::abs(o[0] - c[0]) < 1e-12 && std::abs(o[1] - c[1]) < 1e-12);
    if (!dup) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SubdiffSet PolarCone::slice(double w) const {
  // constraint per ray d: d0·z − d1·w <= 0
  double lo = -kInf;
  double hi = kInf;
  for (const auto& d : rays) {
    const Dir2 u = normalized(d);
    const double a = u[0];
    const double b = u[1] * w;
    if (std::abs(a) <= 1e-14) {
      if (-b > 1e-14) return SubdiffSet::empty(1);
      continue;
    }
    if (a > 0) {
      hi = std::min(hi, b / a);
    } else {
      lo = std::max(lo, b / a);
    }
  }
  if (lo > hi + 1e-14) return SubdiffSet::empty(1);
  if (lo > hi) lo = hi;
  return SubdiffSet::interval(lo, hi);
}

std::vector<Vec> NormalCone::generators() const {
  std::vector<Vec> out;
  if (smooth) {
    const std::size_t n = subspace.n;
    // (−H e_j, e_j) and its negative span the subspace
    for (std::size_t j = 0; j < n; ++j) {
      Vec g(2 * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) g[i] = -subspace.hessian[i * n + j];
      g[n + j] = 1.0;
      out.push_back(g);
      out.push_back(scaled(g, -1.0));
    }
    return out;
  }
  for (const auto& g : polar.generators()) out.push_back({g[0], g[1]});
  return out;
}

NormalCone regular_normal_cone(const GraphPatch& patch) {
  NormalCone c;
  if (const auto* s = std::get_if<SmoothPatch>(&patch)) {
    c.smooth = true;
    c.subspace = *s;
  } else {
    c.polar.rays = std::get<CurvePatch>(patch).tangent;
  }
  return c;
}

namespace {

SubdiffSet smooth_slice(const SmoothPatch& s, VecView w) {
  require_dim(w, s.n, "second-order direction");
  // (z, −w) = (−Hb, b) forces b = −w, z = Hw
  Vec z(s.n, 0.0);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) z[i] += s.hessian[i * s.n + j] * w[j];
  return SubdiffSet::point(z);
}

}  // namespace

SubdiffSet combined_slice(const GraphPatch& patch, VecView w) {
  if (const auto* s = std::get_if<SmoothPatch>(&patch)) return smooth_slice(*s, w);
  require_dim(w, 1, "second-order direction");
  return PolarCone{std::get<CurvePatch>(patch).tangent}.slice(w[0]);
}

SubdiffSet limiting_slice(const GraphPatch& patch, VecView w) {
  if (const auto* s = std::get_if<SmoothPatch>(&patch)) return smooth_slice(*s, w);
  require_dim(w, 1, "second-order direction");
  const auto& c = std::get<CurvePatch>(patch);
  SubdiffSet out = PolarCone{c.tangent}.slice(w[0]);
  for (const auto& stratum : c.strata) out = SubdiffSet::unite_1d(out, PolarCone{stratum}.slice(w[0]));
  return out;
}

GraphPatch sheared(const GraphPatch& patch, double s) {
  if (const auto* sp = std::get_if<SmoothPatch>(&patch)) {
    SmoothPatch out = *sp;
    for (std::size_t i = 0; i < out.n; ++i) out.hessian[i * out.n + i] += s;
    return out;
  }
  CurvePatch out = std::get<CurvePatch>(patch);
  const auto shear = [s](Dir2 d) { return Dir2{d[0], d[1] + s * d[0]}; };
  for (auto& d : out.tangent) d = shear(d);
  for (auto& st : out.strata)
    for (auto& d : st) d = shear(d);
  return out;
}

void to_json(nlohmann::json& j, const NormalCone& c) {
  j = {{"kind", c.smooth ? "subspace" : "polyhedral"}, {"generators", c.generators()}};
  if (!c.smooth) {
    auto rays = nlohmann::json::array();
    for (const auto& d : c.polar.rays) rays.push_back({d[0], d[1]});
    j["polar_of"] = rays;
  }
}

}  // namespace varcert
