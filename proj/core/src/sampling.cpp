#include "varcert/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"

namespace varcert {

Window::Window(Vec x, Vec xstar, double r1_, double r2_, double eps_)
    : center_x(std::move(x)), center_xstar(std::move(xstar)), r1(r1_), r2(r2_), eps(eps_) {}

void Window::validate(std::size_t n) const {
  require_dim(center_x, n, "window center");
  require_dim(center_xstar, n, "window center covector");
  if (!(r1 > 0.0) || !(r2 > 0.0) || !(eps > 0.0)) {
    throw InputError("window: r1, r2 and eps must be positive");
  }
}

bool Window::in_U(VecView x, const NormModel& m) const { return m.distance(x, center_x) < r1; }

bool Window::in_V(VecView xstar, const NormModel& m) const {
  return m.dual_distance(xstar, center_xstar) < r2;
}

bool Window::in_U_eps(VecView x, double fx, double fbar, const NormModel& m) const {
  return in_U(x, m) && fx < fbar + eps;
}

Window Window::shrunk(double factor) const {
  Window w = *this;
  w.r1 *= factor;
  w.r2 *= factor;
  return w;
}

void to_json(nlohmann::json& j, const Window& w) {
  j = {{"center", w.center_x},
       {"cstar", w.center_xstar},
       {"r1", w.r1},
       {"r2", w.r2},
       {"eps", real_to_json(w.eps)}};
}

void from_json(const nlohmann::json& j, Window& w) {
  w.center_x = j.at("center").get<Vec>();
  w.center_xstar = j.at("cstar").get<Vec>();
  w.r1 = j.at("r1").get<double>();
  w.r2 = j.at("r2").get<double>();
  w.eps = real_from_json(j.at("eps"));
}

void to_json(nlohmann::json& j, const GraphSample& s) {
  j = {{"x", s.x}, {"xstar", s.xstar}, {"fx", s.fx}};
}

std::vector<Vec> window_points(const FunctionModel& phi, const Window& w, const SamplePlan& plan,
                               const NormModel& m) {
  std::vector<Vec> pts = probe_points(phi, plan);
  pts.push_back(w.center_x);
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Vec> out;
  out.reserve(pts.size());
  for (auto& x : pts) {
    if (w.in_U(x, m) && std::isfinite(phi.value(x))) out.push_back(std::move(x));
  }
  return out;
}

std::vector<GraphSample> graph_samples(const FunctionModel& phi, const Window& w,
                                       const SamplePlan& plan, const NormModel& m,
                                       SampleOptions opts) {
  if (!phi.has_subdiff()) {
    throw CapabilityError("graph_samples: model '" + phi.name() + "' has no subdifferential oracle");
  }
  w.validate(phi.dim());
  const double fbar = phi.value(w.center_x);
  if (!std::isfinite(fbar)) throw InputError("graph_samples: φ(x̄) is not finite");
  const std::vector<Vec> pts = window_points(phi, w, plan, m);
  auto per_point = parallel_map<std::vector<GraphSample>>(pts.size(), [&](std::size_t i) {
    std::vector<GraphSample> out;
    const Vec& x = pts[i];
    const double fx = phi.value(x);
    if (opts.attentive && !(fx < fbar + w.eps)) return out;
    const SubdiffSet s = phi.subdiff(x);
    for (auto& xs : s.enumerate(w.center_xstar, w.r2, plan.seed + i)) {
      if (w.in_V(xs, m)) out.push_back({x, std::move(xs), fx});
    }
    std::sort(out.begin(), out.end(),
              [](const GraphSample& a, const GraphSample& b) { return lex_less(a.xstar, b.xstar); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  });
  std::vector<GraphSample> samples;
  for (auto& v : per_point)
    for (auto& s : v) samples.push_back(std::move(s));
  return samples;
}

std::vector<GraphSample> graph_samples(const FunctionModel& phi, const Window& w,
                                       const SamplePlan& plan) {
  return graph_samples(phi, w, plan, NormModel::euclidean(phi.dim()));
}

}  // namespace varcert
