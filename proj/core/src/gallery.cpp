#include "varcert/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varcert/errors.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b, double rel = 1e-13) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1e-300); }
bool is_zero(double y) { return std::abs(y) <= 1e-12; }

Dir2 neg(Dir2 d) { return {-d[0], -d[1]}; }

CurvePatch negated(CurvePatch p) {
  for (auto& d : p.tangent) d = neg(d);
  for (auto& s : p.strata)
    for (auto& d : s) d = neg(d);
  return p;
}

const std::vector<Dir2> kVertical = {{0, 1}, {0, -1}};
const std::vector<Dir2> kHorizontal = {{1, 0}, {-1, 0}};

GraphPatch flat_patch(std::size_t n, double curvature) {
  SmoothPatch s;
  s.n = n;
  s.hessian.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) s.hessian[i * n + i] = curvature;
  return s;
}

void require_member(const FunctionModel& phi, VecView x, VecView y) {
  if (!phi.subdiff(x).contains(y, 1e-10)) {
    throw PreconditionError("graph patch: x* is not a subgradient of " + phi.name() + " at x");
  }
}

// ---- staircase -----------------------------------------------------------

double slope_of(double k) { return (k + 1.0) / k; }

enum class StairKind { kOrigin, kEnd, kConvex, kConcave, kSlope, kFlat };

struct StairLoc {
  StairKind kind;
  double k;
};

// Past this index k ± 1 is no longer exact in double; φ(a) = a to relative
// accuracy a there.
constexpr double kMaxStairIndex = 0x1p50;

// a > 0 assumed; a <= 1.
StairLoc locate(double a) {
  if (a == 1.0) return {StairKind::kEnd, 1.0};
  const double inv = 1.0 / a;
  if (!(inv < kMaxStairIndex)) return {StairKind::kSlope, kInf};
  const double big_k = std::floor(inv);
  for (double k = std::max(1.0, big_k - 1.0); k <= big_k + 1.0; k += 1.0) {
    if (near(a, 1.0 / (k + 1.0))) return {StairKind::kConvex, k};
    if (near(a, (k + 2.0) / ((k + 1.0) * (k + 1.0)))) return {StairKind::kConcave, k};
  }
  double k = std::max(1.0, big_k);
  while (k > 1.0 && a > 1.0 / k) k -= 1.0;
  while (a < 1.0 / (k + 1.0)) k += 1.0;
  const double c = (k + 2.0) / ((k + 1.0) * (k + 1.0));
  return {a < c ? StairKind::kSlope : StairKind::kFlat, k};
}

double staircase_value(double x) {
  const double a = std::abs(x);
  if (a > 1.0) return kInf;
  if (a == 0.0) return 0.0;
  const double inv = 1.0 / a;
  if (!(inv < kMaxStairIndex)) return a;
  double k = std::max(1.0, std::floor(inv));
  while (k > 1.0 && a > 1.0 / k) k -= 1.0;
  while (a < 1.0 / (k + 1.0)) k += 1.0;
  return std::min(a + (a - 1.0 / (k + 1.0)) / k, 1.0 / k);
}

SubdiffSet staircase_subdiff_positive(double a) {
  if (a == 0.0) return SubdiffSet::interval(-1.0, 1.0);
  const StairLoc loc = locate(a);
  switch (loc.kind) {
    case StairKind::kOrigin:
      return SubdiffSet::interval(-1.0, 1.0);
    case StairKind::kEnd:
      return SubdiffSet::interval(0.0, kInf);
    case StairKind::kConvex:
      return SubdiffSet::interval(0.0, slope_of(loc.k));
    case StairKind::kConcave:
      return SubdiffSet::points({{0.0}, {slope_of(loc.k)}});
    case StairKind::kSlope:
      return SubdiffSet::point({std::isfinite(loc.k) ? slope_of(loc.k) : 1.0});
    case StairKind::kFlat:
      return SubdiffSet::point({0.0});
  }
  return SubdiffSet::empty(1);
}

GraphPatch staircase_patch_positive(double a, double y) {
  if (a == 0.0) {
    if (is_zero(y)) {
      CurvePatch p;
      p.tangent = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      p.strata = {kHorizontal,
                  kVertical,
                  {{-1, 0}, {0, 1}},
                  {{1, 0}, {0, -1}},
                  {{1, 0}},
                  {{-1, 0}},
                  {{0, 1}, {0, -1}, {1, 0}},
                  {{0, 1}, {0, -1}, {-1, 0}}};
      return p;
    }
    if (near(y, 1.0)) {
      CurvePatch p;
      p.tangent = {{0, -1}, {1, 1}};
      p.strata = {kVertical, kHorizontal, {{0, -1}, {1, 0}}, {{-1, 0}}, {{0, 1}, {0, -1}, {1, 0}}};
      return p;
    }
    // 0 < y < 1: the segment {0}×[−1,1] is approached from the right by the
    // vertical segments at 1/(k+1)
    CurvePatch p;
    p.tangent = {{0, 1}, {0, -1}, {1, 0}};
    p.strata = {kVertical};
    return p;
  }
  const StairLoc loc = locate(a);
  const double s = std::isfinite(loc.k) ? slope_of(loc.k) : 1.0;
  CurvePatch p;
  switch (loc.kind) {
    case StairKind::kSlope:
    case StairKind::kFlat:
      return flat_patch(1, 0.0);
    case StairKind::kOrigin:
      break;
    case StairKind::kEnd:
      if (is_zero(y)) {
        p.tangent = {{-1, 0}, {0, 1}};
        p.strata = {CurvePatch::branch({-1, 0}), kVertical};
      } else {
        p.tangent = kVertical;
        p.strata = {kVertical};
      }
      return p;
    case StairKind::kConvex:
      if (is_zero(y)) {
        p.tangent = {{-1, 0}, {0, 1}};
        p.strata = {CurvePatch::branch({-1, 0}), kVertical};
      } else if (near(y, s)) {
        p.tangent = {{0, -1}, {1, 0}};
        p.strata = {kVertical, CurvePatch::branch({1, 0})};
      } else {
        p.tangent = kVertical;
        p.strata = {kVertical};
      }
      return p;
    case StairKind::kConcave:
      if (is_zero(y)) {
        p.tangent = {{1, 0}};
        p.strata = {CurvePatch::branch({1, 0})};
      } else {
        p.tangent = {{-1, 0}};
        p.strata = {CurvePatch::branch({-1, 0})};
      }
      return p;
  }
  return p;
}

SubdiffSet mirrored(const SubdiffSet& s) {
  if (s.kind() == SubdiffSet::Kind::kIntervals) {
    std::vector<Interval> out;
    for (const auto& iv : s.interval_list()) out.push_back({-iv.hi, -iv.lo});
    return SubdiffSet::intervals(out);
  }
  if (s.kind() == SubdiffSet::Kind::kPoints) {
    std::vector<Vec> out;
    for (const auto& p : s.point_list()) out.push_back({-p[0]});
    return SubdiffSet::points(out);
  }
  return s;
}

// ---- helpers for separable models ----------------------------------------

double get_param(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw InputError(std::string("gallery: parameter '") + key + "' must be numeric");
}

std::size_t get_count(const nlohmann::json& params, const char* key, std::size_t fallback) {
  const double v = get_param(params, key, static_cast<double>(fallback));
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e7) {
    throw InputError(std::string("gallery: parameter '") + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

void check_params(const nlohmann::json& params, std::initializer_list<const char*> allowed,
                  const std::string& name) {
  if (!params.is_object()) throw InputError("gallery: parameters must be an object");
  for (const auto& [k, v] : params.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw InputError("gallery: model '" + name + "' has no parameter '" + k + "'");
  }
}

}  // namespace

namespace models {

double staircase_kink_convex(int k) { return 1.0 / (k + 1.0); }
double staircase_kink_concave(int k) { return (k + 2.0) / ((k + 1.0) * (k + 1.0)); }

FunctionModel staircase(int max_breakpoint_k) {
  FunctionModel phi("staircase", 1, [](VecView x) { return staircase_value(x[0]); });
  phi.with_subdiff([](VecView x) {
    const double a = std::abs(x[0]);
    const SubdiffSet s = staircase_subdiff_positive(a);
    return x[0] < 0.0 ? mirrored(s) : s;
  });
  FunctionModel probe = phi;
  phi.with_patch([probe](VecView x, VecView y) -> GraphPatch {
    require_member(probe, x, y);
    const bool flip = x[0] < 0.0 || (x[0] == 0.0 && y[0] < 0.0);
    GraphPatch p = flip ? staircase_patch_positive(-x[0], -y[0]) : staircase_patch_positive(x[0], y[0]);
    if (flip) {
      if (auto* c = std::get_if<CurvePatch>(&p)) return negated(*c);
    }
    return p;
  });
  std::vector<Vec> bps = {{0.0}, {1.0}, {-1.0}};
  for (int k = 1; k <= max_breakpoint_k; ++k) {
    for (double b : {staircase_kink_convex(k), staircase_kink_concave(k)}) {
      bps.push_back({b});
      bps.push_back({-b});
    }
  }
  ModelMeta meta;
  meta.subdiff_continuous = true;
  meta.prox_bounded = ProxBound{0.0, 0.0, {0.0}};
  phi.with_meta(meta).with_breakpoints(std::move(bps)).with_params(nlohmann::json::object());
  return phi;
}

FunctionModel zero_one() {
  FunctionModel phi("zero_one", 1, [](VecView x) { return x[0] == 0.0 ? 0.0 : 1.0; });
  phi.with_subdiff([](VecView x) {
    return x[0] == 0.0 ? SubdiffSet::whole_line() : SubdiffSet::point({0.0});
  });
  FunctionModel probe = phi;
  phi.with_patch([probe](VecView x, VecView y) -> GraphPatch {
    require_member(probe, x, y);
    if (x[0] != 0.0) return flat_patch(1, 0.0);
    CurvePatch p;
    if (is_zero(y[0])) {
      p.tangent = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      p.strata = {kVertical, kHorizontal};
    } else {
      p.tangent = kVertical;
      p.strata = {kVertical};
    }
    return p;
  });
  ModelMeta meta;
  meta.prox_regular = ProxRegularity{0.0, 0.5};
  meta.prox_bounded = ProxBound{0.0, 0.0, {0.0}};
  phi.with_meta(meta).with_breakpoints({{0.0}});
  return phi;
}

FunctionModel l1_weighted_square(std::size_t m) {
  if (m == 0) throw InputError("l1_weighted_square: m must be positive");
  const double inv_m = 1.0 / static_cast<double>(m);
  FunctionModel phi("l1_weighted_square", m, [inv_m](VecView x) { return dot(x, x) * inv_m; });
  phi.with_subdiff([inv_m](VecView x) { return SubdiffSet::point(scaled(x, 2.0 * inv_m)); });
  phi.with_patch([m, inv_m](VecView, VecView) { return flat_patch(m, 2.0 * inv_m); });
  phi.with_prox([inv_m](double lambda, VecView x) {
    return std::vector<Vec>{scaled(x, 1.0 / (1.0 + 2.0 * lambda * inv_m))};
  });
  ModelMeta meta;
  meta.is_convex = true;
  meta.subdiff_continuous = true;
  meta.prox_regular = ProxRegularity{0.0, kInf};
  meta.prox_bounded = ProxBound{0.0, 0.0, Vec(m, 0.0)};
  phi.with_meta(meta).with_breakpoints({Vec(m, 0.0)}).with_params({{"m", m}});
  return phi;
}

FunctionModel abs_value(std::size_t n) {
  FunctionModel phi("abs", n, [](VecView x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  });
  phi.with_subdiff([n](VecView x) {
    Vec lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = x[i] > 0 ? 1.0 : -1.0;
      hi[i] = x[i] < 0 ? -1.0 : 1.0;
    }
    if (n == 1) return SubdiffSet::interval(lo[0], hi[0]);
    return SubdiffSet::box(lo, hi);
  });
  FunctionModel probe = phi;
  phi.with_patch([probe, n](VecView x, VecView y) -> GraphPatch {
    require_member(probe, x, y);
    bool smooth = true;
    for (double v : x) smooth = smooth && v != 0.0;
    if (smooth) return flat_patch(n, 0.0);
    if (n != 1) throw CapabilityError("abs: graph patches at kinks are available in one dimension only");
    CurvePatch p;
    if (near(y[0], 1.0)) {
      p.tangent = {{0, -1}, {1, 0}};
      p.strata = {kVertical, CurvePatch::branch({1, 0})};
    } else if (near(y[0], -1.0)) {
      p.tangent = {{0, 1}, {-1, 0}};
      p.strata = {kVertical, CurvePatch::branch({-1, 0})};
    } else {
      p.tangent = kVertical;
      p.strata = {kVertical};
    }
    return p;
  });
  phi.with_prox([](double lambda, VecView x) {
    Vec w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]) - lambda;
      w[i] = a > 0 ? std::copysign(a, x[i]) : 0.0;
    }
    return std::vector<Vec>{w};
  });
  ModelMeta meta;
  meta.is_convex = true;
  meta.subdiff_continuous = true;
  meta.prox_regular = ProxRegularity{0.0, kInf};
  meta.prox_bounded = ProxBound{0.0, 0.0, Vec(n, 0.0)};
  phi.with_meta(meta).with_breakpoints({Vec(n, 0.0)}).with_params({{"n", n}});
  return phi;
}

FunctionModel quadratic(double alpha, std::size_t n) {
  if (!std::isfinite(alpha)) throw InputError("quadratic: alpha must be finite");
  FunctionModel phi("quadratic", n, [alpha](VecView x) { return 0.5 * alpha * dot(x, x); });
  phi.with_subdiff([alpha](VecView x) { return SubdiffSet::point(scaled(x, alpha)); });
  phi.with_patch([alpha, n](VecView, VecView) { return flat_patch(n, alpha); });
  phi.with_prox([alpha](double lambda, VecView x) {
    if (!(1.0 + lambda * alpha > 0.0)) {
      throw PreconditionError("quadratic: prox undefined for 1 + λα <= 0");
    }
    return std::vector<Vec>{scaled(x, 1.0 / (1.0 + lambda * alpha))};
  });
  ModelMeta meta;
  meta.is_convex = alpha >= 0.0;
  meta.subdiff_continuous = true;
  meta.prox_regular = ProxRegularity{std::max(0.0, -alpha), kInf};
  meta.prox_bounded = ProxBound{std::min(0.0, 0.5 * alpha), 0.0, Vec(n, 0.0)};
  phi.with_meta(meta).with_breakpoints({Vec(n, 0.0)}).with_params({{"alpha", alpha}, {"n", n}});
  return phi;
}

FunctionModel huber(double delta, std::size_t n) {
  if (!(delta > 0.0)) throw InputError("huber: delta must be positive");
  const auto h = [delta](double t) {
    const double a = std::abs(t);
    return a <= delta ? t * t / (2.0 * delta) : a - 0.5 * delta;
  };
  FunctionModel phi("huber_source", n, [h](VecView x) {
    double s = 0.0;
    for (double v : x) s += h(v);
    return s;
  });
  phi.with_subdiff([delta](VecView x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::clamp(x[i] / delta, -1.0, 1.0);
    return SubdiffSet::point(g);
  });
  FunctionModel probe = phi;
  phi.with_patch([probe, delta, n](VecView x, VecView y) -> GraphPatch {
    require_member(probe, x, y);
    SmoothPatch s;
    s.n = n;
    s.hessian.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(x[i]);
      if (near(a, delta, 1e-14)) {
        if (n != 1) throw CapabilityError("huber_source: graph patches at |xᵢ| = δ are available in one dimension only");
        const double sgn = x[0] > 0 ? 1.0 : -1.0;
        CurvePatch p;
        const Dir2 inner{-sgn, -sgn / delta};
        const Dir2 outer{sgn, 0.0};
        p.tangent = {inner, outer};
        p.strata = {CurvePatch::branch(inner), CurvePatch::branch(outer)};
        return p;
      }
      s.hessian[i * n + i] = a < delta ? 1.0 / delta : 0.0;
    }
    return s;
  });
  phi.with_prox([delta](double lambda, VecView x) {
    Vec w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      w[i] = std::abs(x[i]) <= delta + lambda ? x[i] * delta / (delta + lambda)
                                              : x[i] - std::copysign(lambda, x[i]);
    }
    return std::vector<Vec>{w};
  });
  ModelMeta meta;
  meta.is_convex = true;
  meta.subdiff_continuous = true;
  meta.prox_regular = ProxRegularity{0.0, kInf};
  meta.prox_bounded = ProxBound{0.0, 0.0, Vec(n, 0.0)};
  std::vector<Vec> bps = {Vec(n, 0.0)};
  if (n == 1) {
    bps.push_back({delta});
    bps.push_back({-delta});
  }
  phi.with_meta(meta).with_breakpoints(std::move(bps)).with_params({{"delta", delta}, {"n", n}});
  return phi;
}

FunctionModel indicator_interval(double lo, double hi) {
  if (!(lo <= hi)) throw InputError("indicator_interval: needs lo <= hi");
  FunctionModel phi("indicator", 1, [lo, hi](VecView x) { return x[0] >= lo && x[0] <= hi ? 0.0 : kInf; });
  phi.with_subdiff([lo, hi](VecView x) {
    const double v = x[0];
    if (lo == hi) return SubdiffSet::whole_line();
    if (v == lo) return SubdiffSet::interval(-kInf, 0.0);
    if (v == hi) return SubdiffSet::interval(0.0, kInf);
    return SubdiffSet::point({0.0});
  });
  FunctionModel probe = phi;
  phi.with_patch([probe, lo, hi](VecView x, VecView y) -> GraphPatch {
    require_member(probe, x, y);
    if (x[0] != lo && x[0] != hi) return flat_patch(1, 0.0);
    if (lo == hi) throw CapabilityError("indicator: degenerate interval has no curve patch");
    CurvePatch p;
    const double side = x[0] == hi ? 1.0 : -1.0;  // outward normal sign
    if (is_zero(y[0])) {
      p.tangent = {{-side, 0}, {0, side}};
      p.strata = {CurvePatch::branch({-side, 0}), kVertical};
    } else {
      p.tangent = kVertical;
      p.strata = {kVertical};
    }
    return p;
  });
  phi.with_prox([lo, hi](double, VecView x) { return std::vector<Vec>{{std::clamp(x[0], lo, hi)}}; });
  ModelMeta meta;
  meta.is_convex = true;
  meta.subdiff_continuous = true;
  meta.prox_regular = ProxRegularity{0.0, kInf};
  meta.prox_bounded = ProxBound{0.0, 0.0, {lo}};
  phi.with_meta(meta).with_breakpoints({{lo}, {hi}}).with_params({{"lo", lo}, {"hi", hi}});
  return phi;
}

FunctionModel negative_quartic() {
  FunctionModel phi("negative_quartic", 1, [](VecView x) { return -std::pow(x[0], 4); });
  phi.with_subdiff([](VecView x) { return SubdiffSet::point({-4.0 * x[0] * x[0] * x[0]}); });
  phi.with_patch([](VecView x, VecView) { return flat_patch(1, -12.0 * x[0] * x[0]); });
  ModelMeta meta;
  meta.subdiff_continuous = true;
  phi.with_meta(meta).with_breakpoints({{0.0}});
  return phi;
}

FunctionModel norm_power(const NormModel& m) {
  FunctionModel phi("norm_power", m.dim(), [m](VecView x) {
    const double v = m.norm(x);
    return v * v;
  });
  phi.with_subdiff([m](VecView x) { return SubdiffSet::point(scaled(m.duality_map(x), 2.0)); });
  ModelMeta meta;
  meta.is_convex = true;
  meta.subdiff_continuous = true;
  meta.prox_bounded = ProxBound{0.0, 0.0, Vec(m.dim(), 0.0)};
  nlohmann::json norm;
  to_json(norm, m);
  phi.with_meta(meta).with_breakpoints({Vec(m.dim(), 0.0)}).with_params({{"norm", norm}});
  return phi;
}

}  // namespace models

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {"staircase", "zero_one", "l1_weighted_square",
                                                 "abs", "quadratic", "huber_source"};
  return names;
}

FunctionModel gallery_lookup(const std::string& name, const nlohmann::json& params_in) {
  const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
  if (name == "staircase") {
    check_params(params, {}, name);
    return models::staircase();
  }
  if (name == "zero_one") {
    check_params(params, {}, name);
    return models::zero_one();
  }
  if (name == "l1_weighted_square") {
    check_params(params, {"m"}, name);
    return models::l1_weighted_square(get_count(params, "m", 512));
  }
  if (name == "abs") {
    check_params(params, {"n"}, name);
    return models::abs_value(get_count(params, "n", 1));
  }
  if (name == "quadratic") {
    check_params(params, {"alpha", "n"}, name);
    return models::quadratic(get_param(params, "alpha", 1.0), get_count(params, "n", 1));
  }
  if (name == "huber_source") {
    check_params(params, {"delta", "n"}, name);
    return models::huber(get_param(params, "delta", 0.5), get_count(params, "n", 1));
  }
  throw InputError("unknown gallery model '" + name + "'");
}

std::pair<std::string, nlohmann::json> parse_gallery_spec(const std::string& spec) {
  const auto q = spec.find('?');
  std::string name = spec.substr(0, q);
  nlohmann::json params = nlohmann::json::object();
  if (q != std::string::npos) {
    std::stringstream ss(spec.substr(q + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw InputError("gallery spec: expected k=v, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      try {
        std::size_t used = 0;
        const double d = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        params[key] = d;
      } catch (const std::exception&) {
        throw InputError("gallery spec: value for '" + key + "' is not a number");
      }
    }
  }
  return {name, params};
}

NormFn l1_grid_norm(std::size_t m) { return weighted_l1_norm(Vec(m, 1.0 / static_cast<double>(m))); }

}  // namespace varcert
