#include "varcert/function_model.hpp"

#include <algorithm>
#include <cmath>

#include "varcert/errors.hpp"

namespace varcert {

void to_json(nlohmann::json& j, const ModelMeta& m) {
  j = {{"is_convex", m.is_convex}, {"subdiff_continuous", m.subdiff_continuous}};
  if (m.prox_regular) {
    j["prox_regular"] = {{"r", m.prox_regular->r}, {"eps", m.prox_regular->eps}};
  } else {
    j["prox_regular"] = nullptr;
  }
  if (m.prox_bounded) {
    j["prox_bounded"] = {{"alpha", m.prox_bounded->alpha},
                         {"beta", m.prox_bounded->beta},
                         {"anchor", m.prox_bounded->anchor}};
  } else {
    j["prox_bounded"] = nullptr;
  }
}

FunctionModel::FunctionModel(std::string name, std::size_t n, EvalFn eval)
    : name_(std::move(name)), n_(n), eval_(std::move(eval)) {
  if (n_ == 0) throw InputError("function model: dimension must be positive");
  if (!eval_) throw InputError("function model: missing evaluation oracle");
}

double FunctionModel::value(VecView x) const {
  require_dim(x, n_, "function model");
  return eval_(x);
}

SubdiffSet FunctionModel::subdiff(VecView x) const {
  if (!subdiff_) throw CapabilityError("model '" + name_ + "' has no subdifferential oracle");
  require_dim(x, n_, "subdiff");
  if (!std::isfinite(value(x))) return SubdiffSet::empty(n_);
  return subdiff_(x);
}

std::vector<Vec> FunctionModel::prox(double lambda, VecView x) const {
  if (!prox_) throw CapabilityError("model '" + name_ + "' has no proximal oracle");
  return prox_(lambda, x);
}

GraphPatch FunctionModel::patch(VecView x, VecView xstar) const {
  if (!patch_) throw CapabilityError("model '" + name_ + "' has no graph-patch description");
  require_dim(x, n_, "patch");
  require_dim(xstar, n_, "patch");
  return patch_(x, xstar);
}

FunctionModel& FunctionModel::with_subdiff(SubdiffFn f) {
  subdiff_ = std::move(f);
  return *this;
}
FunctionModel& FunctionModel::with_prox(ProxFn f) {
  prox_ = std::move(f);
  return *this;
}
FunctionModel& FunctionModel::with_patch(PatchFn f) {
  patch_ = std::move(f);
  return *this;
}
FunctionModel& FunctionModel::with_meta(ModelMeta m) {
  meta_ = std::move(m);
  return *this;
}
FunctionModel& FunctionModel::with_breakpoints(std::vector<Vec> pts) {
  breakpoints_ = std::move(pts);
  return *this;
}
FunctionModel& FunctionModel::with_params(nlohmann::json p) {
  params_ = std::move(p);
  return *this;
}
FunctionModel& FunctionModel::with_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

FunctionModel tilted(const FunctionModel& phi, VecView xstar) {
  require_dim(xstar, phi.dim(), "tilt");
  const Vec t(xstar.begin(), xstar.end());
  FunctionModel out(phi.name() + "-tilted", phi.dim(), [phi, t](VecView x) {
    const double v = phi.value(x);
    return std::isfinite(v) ? v - dot(t, x) : v;
  });
  if (phi.has_subdiff()) {
    const Vec neg = scaled(t, -1.0);
    out.with_subdiff([phi, neg](VecView x) { return phi.subdiff(x).translated(neg); });
  }
  if (phi.has_patch()) {
    out.with_patch([phi, t](VecView x, VecView y) { return phi.patch(x, add(y, t)); });
  }
  ModelMeta meta;
  meta.is_convex = phi.meta().is_convex;
  meta.prox_regular = phi.meta().prox_regular;
  meta.subdiff_continuous = phi.meta().subdiff_continuous;
  out.with_meta(meta).with_breakpoints(phi.breakpoints());
  out.with_params({{"base", phi.name()}, {"tilt", t}});
  return out;
}

FunctionModel quadratic_shift(const FunctionModel& phi, double sigma, const NormModel& m) {
  if (m.dim() != phi.dim()) throw InputError("quadratic shift: norm and model dimensions differ");
  FunctionModel out(phi.name() + "-shifted", phi.dim(), [phi, sigma, m](VecView x) {
    const double v = phi.value(x);
    if (!std::isfinite(v)) return v;
    const double nx = m.norm(x);
    return v - 0.5 * sigma * nx * nx;
  });
  if (phi.has_subdiff()) {
    out.with_subdiff([phi, sigma, m](VecView x) {
      return phi.subdiff(x).translated(scaled(m.duality_map(x), -sigma));
    });
  }
  if (phi.has_patch() && m.is_euclidean()) {
    out.with_patch([phi, sigma](VecView x, VecView y) {
      return sheared(phi.patch(x, axpy(y, sigma, x)), -sigma);
    });
  }
  ModelMeta meta;
  meta.subdiff_continuous = phi.meta().subdiff_continuous;
  meta.prox_regular = phi.meta().prox_regular;
  out.with_meta(meta).with_breakpoints(phi.breakpoints());
  out.with_params({{"base", phi.name()}, {"sigma", sigma}});
  return out;
}

std::vector<Vec> probe_points(const FunctionModel& phi, const SamplePlan& plan) {
  std::vector<Vec> pts = plan.points();
  const std::size_t n = phi.dim();
  for (const auto& b : phi.breakpoints()) {
    if (b.size() != n) continue;
    if (plan.box.contains(b)) pts.push_back(b);
    for (std::size_t i = 0; i < n; ++i) {
      for (double d : {1e-2, 1e-3, 1e-5}) {
        for (double s : {-1.0, 1.0}) {
          Vec y = b;
          y[i] += s * d;
          if (plan.box.contains(y)) pts.push_back(std::move(y));
        }
      }
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace varcert
