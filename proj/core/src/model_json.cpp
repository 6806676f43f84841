#include "varcert/model_json.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/gallery.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed region; bounds may be infinite.
struct Region {
  Vec lo;
  Vec hi;

  bool contains(VecView x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

struct Piece {
  Region region;
  bool infinite = false;
  Vec q;  // row-major n×n
  Vec b;
  double c = 0.0;

  double value(VecView x) const {
    if (infinite) return kInf;
    const std::size_t n = x.size();
    double v = c + dot(b, x);
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += q[i * n + j] * x[j];
      v += 0.5 * x[i] * row;
    }
    return v;
  }

  Vec gradient(VecView x) const {
    const std::size_t n = x.size();
    Vec g = b;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i] += 0.5 * (q[i * n + j] + q[j * n + i]) * x[j];
    return g;
  }

  double curvature_1d() const { return q[0]; }
};

struct ExplicitSubdiff {
  Vec at;
  SubdiffSet set;
};

struct Doc {
  std::size_t n = 0;
  bool convex = false;
  std::vector<Piece> pieces;
  std::vector<ExplicitSubdiff> explicit_sets;

  double value(VecView x) const {
    double v = kInf;
    for (const auto& p : pieces)
      if (p.region.contains(x)) v = std::min(v, p.value(x));
    return v;
  }

  // Finite pieces whose region contains x and whose value equals φ(x).
  std::vector<const Piece*> active(VecView x) const {
    const double v = value(x);
    std::vector<const Piece*> out;
    if (!std::isfinite(v)) return out;
    const double tol = 1e-12 * std::max(1.0, std::abs(v));
    for (const auto& p : pieces) {
      if (p.infinite || !p.region.contains(x)) continue;
      if (std::abs(p.value(x) - v) <= tol) out.push_back(&p);
    }
    return out;
  }

  const ExplicitSubdiff* explicit_at(VecView x) const {
    for (const auto& e : explicit_sets)
      if (max_abs_distance(e.at, x) <= 1e-12) return &e;
    return nullptr;
  }

  // One-dimensional one-sided data at x: gradient and curvature of the
  // active piece extending to the left / right, if any.
  struct Side {
    bool present = false;
    double grad = 0.0;
    double curv = 0.0;
  };

  std::pair<Side, Side> sides(double x) const {
    Side left, right;
    const Vec xv{x};
    for (const Piece* p : active(xv)) {
      if (p->region.lo[0] < x && !left.present) left = {true, p->gradient(xv)[0], p->curvature_1d()};
      if (p->region.hi[0] > x && !right.present) right = {true, p->gradient(xv)[0], p->curvature_1d()};
    }
    return {left, right};
  }

  SubdiffSet subdiff(VecView x) const {
    if (const auto* e = explicit_at(x)) return e->set;
    const auto act = active(x);
    if (act.empty()) return SubdiffSet::empty(n);
    if (n == 1) {
      const auto [l, r] = sides(x[0]);
      if (l.present && r.present) {
        if (l.grad == r.grad) return SubdiffSet::point({l.grad});
        if (l.grad <= r.grad) return SubdiffSet::interval(l.grad, r.grad);
        return SubdiffSet::points({{l.grad}, {r.grad}});
      }
      if (l.present) return SubdiffSet::interval(l.grad, kInf);
      if (r.present) return SubdiffSet::interval(-kInf, r.grad);
      return SubdiffSet::whole_line();
    }
    std::vector<Vec> grads;
    for (const Piece* p : act) grads.push_back(p->gradient(x));
    if (grads.size() == 1) return SubdiffSet::point(grads.front());
    return convex ? SubdiffSet::polyhedral(grads) : SubdiffSet::points(grads);
  }

  GraphPatch patch(VecView x, VecView y) const {
    const auto act = active(x);
    if (act.empty()) throw PreconditionError("json model: patch requested outside the domain");
    bool interior = act.size() == 1;
    if (interior) {
      for (std::size_t i = 0; i < n; ++i) {
        interior = interior && act.front()->region.lo[i] < x[i] && x[i] < act.front()->region.hi[i];
      }
    }
    if (interior && !explicit_at(x)) {
      SmoothPatch s;
      s.n = n;
      s.hessian.resize(n * n);
      const auto& q = act.front()->q;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.hessian[i * n + j] = 0.5 * (q[i * n + j] + q[j * n + i]);
      return s;
    }
    if (n != 1) throw CapabilityError("json model: graph patches at kinks are available in one dimension only");
    const auto [l, r] = sides(x[0]);
    const double v = y[0];
    CurvePatch p;
    const Dir2 lb{-1.0, -l.curv};
    const Dir2 rb{1.0, r.curv};
    const std::vector<Dir2> vertical = {{0, 1}, {0, -1}};
    const auto on = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    const double lo = l.present ? l.grad : -kInf;
    const double hi = r.present ? r.grad : kInf;
    if (l.present && on(v, l.grad)) {
      p.tangent.push_back(lb);
      p.strata.push_back(CurvePatch::branch(lb));
    }
    if (r.present && on(v, r.grad)) {
      p.tangent.push_back(rb);
      p.strata.push_back(CurvePatch::branch(rb));
    }
    if (lo < hi) {
      // convex kink or domain boundary: a vertical segment joins the branches
      const bool at_lo = l.present && on(v, lo);
      const bool at_hi = r.present && on(v, hi);
      if (!at_lo) p.tangent.push_back({0, -1});
      if (!at_hi) p.tangent.push_back({0, 1});
      p.strata.push_back(vertical);
    }
    if (p.tangent.empty()) throw PreconditionError("json model: x* is not a subgradient at x");
    return p;
  }
};

Vec parse_matrix(const nlohmann::json& j, std::size_t n) {
  Vec q(n * n, 0.0);
  if (j.is_number()) {
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = j.get<double>();
    return q;
  }
  if (!j.is_array() || j.size() != n) throw InputError("json model: quadratic must be a number or n×n array");
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = j.at(i).get<Vec>();
    if (row.size() != n) throw InputError("json model: quadratic row has the wrong length");
    for (std::size_t k = 0; k < n; ++k) q[i * n + k] = row[k];
  }
  return q;
}

Region parse_region(const nlohmann::json& j, std::size_t n) {
  Vec lo(n, -kInf), hi(n, kInf);
  if (j.contains("lo")) {
    const auto& a = j.at("lo");
    for (std::size_t i = 0; i < n; ++i) lo[i] = real_from_json(a.is_array() ? a.at(i) : a);
  }
  if (j.contains("hi")) {
    const auto& a = j.at("hi");
    for (std::size_t i = 0; i < n; ++i) hi[i] = real_from_json(a.is_array() ? a.at(i) : a);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(lo[i] <= hi[i])) throw InputError("json model: region needs lo <= hi");
  return Region{lo, hi};
}

}  // namespace

FunctionModel model_from_json(const nlohmann::json& doc_json, const std::string& name) {
  auto doc = std::make_shared<Doc>();
  try {
    doc->n = doc_json.at("dim").get<std::size_t>();
    if (doc->n == 0) throw InputError("json model: dim must be positive");
    doc->convex = doc_json.value("convex", false);
    for (const auto& pj : doc_json.at("pieces")) {
      Piece p;
      p.region = parse_region(pj.at("region"), doc->n);
      if (pj.contains("value")) {
        const double v = real_from_json(pj.at("value"));
        if (v != kInf) {
          p.q.assign(doc->n * doc->n, 0.0);
          p.b.assign(doc->n, 0.0);
          p.c = v;
        } else {
          p.infinite = true;
        }
      } else {
        const auto& f = pj.at("formula");
        p.q = f.contains("quadratic") ? parse_matrix(f.at("quadratic"), doc->n) : Vec(doc->n * doc->n, 0.0);
        p.b = f.contains("linear") ? f.at("linear").get<Vec>() : Vec(doc->n, 0.0);
        if (p.b.size() != doc->n) throw InputError("json model: linear term has the wrong length");
        p.c = f.value("constant", 0.0);
      }
      doc->pieces.push_back(std::move(p));
    }
    if (doc->pieces.empty()) throw InputError("json model: no pieces");
    if (doc_json.contains("subdiff")) {
      for (const auto& sj : doc_json.at("subdiff")) {
        ExplicitSubdiff e{sj.at("at").get<Vec>(), subdiff_set_from_json(sj.at("set"), doc->n)};
        require_dim(e.at, doc->n, "json model subdiff entry");
        doc->explicit_sets.push_back(std::move(e));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("json model: ") + e.what());
  }
  FunctionModel phi(name, doc->n, [doc](VecView x) { return doc->value(x); });
  phi.with_subdiff([doc](VecView x) { return doc->subdiff(x); });
  phi.with_patch([doc](VecView x, VecView y) { return doc->patch(x, y); });
  std::vector<Vec> bps;
  for (const auto& p : doc->pieces) {
    if (doc->n == 1) {
      if (std::isfinite(p.region.lo[0])) bps.push_back({p.region.lo[0]});
      if (std::isfinite(p.region.hi[0])) bps.push_back({p.region.hi[0]});
    }
  }
  for (const auto& e : doc->explicit_sets) bps.push_back(e.at);
  ModelMeta meta;
  meta.is_convex = doc->convex;
  phi.with_meta(meta).with_breakpoints(std::move(bps)).with_params(doc_json);
  return phi;
}

FunctionModel model_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("model file '" + path + "': " + e.what());
  }
  return model_from_json(doc, path);
}

FunctionModel resolve_model(const std::string& spec) {
  const std::string prefix = "gallery:";
  if (spec.rfind(prefix, 0) == 0) {
    auto [name, params] = parse_gallery_spec(spec.substr(prefix.size()));
    return gallery_lookup(name, params);
  }
  return model_from_file(spec);
}

}  // namespace varcert
