#include "varcert/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_value(const FunctionModel& phi, VecView x, const char* what) {
  const double v = phi.value(x);
  if (!std::isfinite(v)) throw InputError(std::string(what) + ": φ is not finite at the base point");
  return v;
}

nlohmann::json vec_json(VecView v) { return Vec(v.begin(), v.end()); }

}  // namespace

double dyadic_ceiling(double required) {
  if (!(required > 0.0)) return 0.0;
  for (double r = 1.0; r <= kMaxProxR; r *= 2.0)
    if (r >= required) return r;
  return kInf;
}

CertificateReport regular_subgradient_check(const FunctionModel& phi, VecView x, VecView xstar, double radius,
                                            const SamplePlan& plan, const NormModel& m,
                                            const Tolerances& tol) {
  require_dim(x, phi.dim(), "regular_subgradient_check");
  require_dim(xstar, phi.dim(), "regular_subgradient_check");
  if (!(radius > 0.0)) throw InputError("regular_subgradient_check: radius must be positive");
  const double fx = finite_value(phi, x, "regular_subgradient_check");

  CertificateReport rep;
  rep.check = "regular_subgradient";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"x", vec_json(x)}, {"xstar", vec_json(xstar)}, {"radius", radius}};
  std::vector<double> ratios;
  std::vector<nlohmann::json> worst_inputs;
  for (double rho : {radius, radius / 4.0, radius / 16.0}) {
    const SamplePlan local = plan.around(x, rho);
    std::vector<Vec> pts = probe_points(phi, local);
    double worst = kInf;
    Vec worst_x;
    for (const auto& y : pts) {
      const double d = m.distance(y, x);
      if (!(d > 0.0) || !(d < rho)) continue;
      const double fy = phi.value(y);
      if (!std::isfinite(fy)) continue;
      const double ratio = (fy - fx - dot(xstar, sub(y, x))) / d;
      ++rep.tested;
      if (ratio < worst) {
        worst = ratio;
        worst_x = y;
      }
    }
    ratios.push_back(worst);
    worst_inputs.push_back({{"rho", rho}, {"xprime", worst_x}, {"ratio", real_to_json(worst)}});
  }
  const double m1 = ratios[0], m2 = ratios[1], m3 = ratios[2];
  // the ratio sequence converges like ρ; Richardson with factor 4
  const double m0 = std::isfinite(m3) && std::isfinite(m2) ? m3 + (m3 - m2) / 3.0 : m3;
  rep.result = {{"ratios", {real_to_json(m1), real_to_json(m2), real_to_json(m3)}},
                {"extrapolated", real_to_json(m0)}};
  if (rep.tested == 0) {
    settle(rep);
    return rep;
  }
  rep.margin = std::max(m0, m3);
  for (std::size_t i = 3; i-- > 0;) {
    if (std::isfinite(ratios[i])) rep.witnesses.push_back({worst_inputs[i], ratios[i], 0.0});
  }
  std::sort(rep.witnesses.begin(), rep.witnesses.end(),
            [](const Witness& a, const Witness& b) { return a.slack() < b.slack(); });
  settle(rep);
  return rep;
}

CertificateReport proximal_subgradient_check(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                             const SamplePlan& plan, const NormModel& m,
                                             const Tolerances& tol) {
  require_dim(xbar, phi.dim(), "proximal_subgradient_check");
  require_dim(xbar_star, phi.dim(), "proximal_subgradient_check");
  const double fbar = finite_value(phi, xbar, "proximal_subgradient_check");
  const double r0 = plan.box.min_half_width();

  CertificateReport rep;
  rep.check = "proximal_subgradient";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"xbar", vec_json(xbar)}, {"xbar_star", vec_json(xbar_star)}};
  double best_r = kInf;
  double best_eps = r0;
  double best_required = kInf;
  Vec best_x;
  double fallback_required = -kInf;
  Vec fallback_x;
  for (double eps : {r0, r0 / 4.0, r0 / 16.0}) {
    const SamplePlan local = plan.around(xbar, eps);
    double required = 0.0;
    Vec arg;
    for (const auto& y : probe_points(phi, local)) {
      const double d = m.distance(y, xbar);
      if (!(d > 0.0) || !(d < eps)) continue;
      const double fy = phi.value(y);
      if (!std::isfinite(fy)) continue;
      ++rep.tested;
      const double deficit = fbar + dot(xbar_star, sub(y, xbar)) - fy - tol.cert_tol;
      const double need = 2.0 * deficit / (d * d);
      if (need > required) {
        required = need;
        arg = y;
      }
    }
    const double r = dyadic_ceiling(required);
    if (r < best_r) {
      best_r = r;
      best_eps = eps;
      best_required = required;
      best_x = arg;
    }
    if (!std::isfinite(r) && (fallback_x.empty() || required < fallback_required)) {
      fallback_required = required;
      fallback_x = arg;
    }
  }
  rep.result = {{"r", real_to_json(best_r)}, {"eps", best_eps}, {"required_r", real_to_json(best_required)}};
  if (rep.tested == 0) {
    settle(rep);
    return rep;
  }
  if (std::isfinite(best_r)) {
    rep.margin = 0.0;
    rep.verdict = Verdict::kCertified;
  } else {
    // slack of the inequality at r = kMaxProxR for the least-bad ε
    const Vec& y = fallback_x;
    const double d2 = m.squared_distance(y, xbar);
    const double lhs = phi.value(y);
    const double rhs = fbar + dot(xbar_star, sub(y, xbar)) - 0.5 * kMaxProxR * d2;
    rep.margin = lhs - rhs;
    rep.witnesses.push_back({{{"x", y}, {"r", kMaxProxR}}, lhs, rhs});
    rep.verdict = Verdict::kRefuted;
  }
  return rep;
}

CertificateReport prox_regularity_certify(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                          const Window& w_in, const SamplePlan& plan, const NormModel& m,
                                          const Tolerances& tol) {
  Window w = w_in;
  w.center_x.assign(xbar.begin(), xbar.end());
  w.center_xstar.assign(xbar_star.begin(), xbar_star.end());
  if (!phi.subdiff(xbar).contains(xbar_star, 1e-10)) {
    throw PreconditionError("prox_regularity_certify: x̄* is not in ∂φ(x̄)");
  }
  const auto samples = graph_samples(phi, w, plan, m);
  const auto pts = window_points(phi, w, plan, m);

  struct Acc {
    double required = 0.0;
    std::size_t sample = 0;
    std::size_t point = 0;
    std::size_t tested = 0;
  };
  const Acc acc = parallel_reduce(
      samples.size(), Acc{},
      [&](Acc& a, std::size_t i) {
        const auto& s = samples[i];
        for (std::size_t j = 0; j < pts.size(); ++j) {
          const double d2 = m.squared_distance(pts[j], s.x);
          if (!(d2 > 0.0)) continue;
          ++a.tested;
          const double fx = phi.value(pts[j]);
          const double deficit = s.fx + dot(s.xstar, sub(pts[j], s.x)) - fx - tol.cert_tol;
          const double need = 2.0 * deficit / d2;
          if (need > a.required) a = {need, i, j, a.tested};
        }
      },
      [](Acc a, Acc b) {
        Acc out = b.required > a.required ? b : a;
        out.tested = a.tested + b.tested;
        return out;
      });

  CertificateReport rep;
  rep.check = "prox_regularity";
  rep.tolerance = tol.cert_tol;
  rep.tested = acc.tested;
  nlohmann::json wj;
  to_json(wj, w);
  rep.params = {{"window", wj}, {"samples", samples.size()}, {"points", pts.size()}};
  const double r = dyadic_ceiling(acc.required);
  rep.result = {{"r", real_to_json(r)}, {"required_r", acc.required}};
  if (rep.tested == 0) {
    settle(rep);
    return rep;
  }
  const double r_used = std::isfinite(r) ? r : kMaxProxR;
  const auto& s = samples[acc.sample];
  const auto& x = pts[acc.point];
  const double lhs = phi.value(x);
  const double rhs = s.fx + dot(s.xstar, sub(x, s.x)) - 0.5 * r_used * m.squared_distance(x, s.x);
  rep.witnesses.push_back({{{"u", s.x}, {"ustar", s.xstar}, {"x", x}, {"r", r_used}}, lhs, rhs});
  rep.margin = lhs - rhs;
  if (std::isfinite(r)) {
    rep.verdict = Verdict::kCertified;
    rep.margin = std::max(rep.margin, 0.0);
  } else {
    rep.verdict = Verdict::kRefuted;
    rep.notes.push_back("no r <= 1024 satisfies the inequality on these samples");
  }
  return rep;
}

CertificateReport subdiff_continuity_check(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                           const std::vector<double>& delta_grid, const SamplePlan& plan,
                                           const NormModel& m, const Tolerances& tol) {
  if (delta_grid.empty()) throw InputError("subdiff_continuity_check: empty δ grid");
  if (!phi.subdiff(xbar).contains(xbar_star, 1e-10)) {
    throw PreconditionError("subdiff_continuity_check: x̄* is not in ∂φ(x̄)");
  }
  const double fbar = finite_value(phi, xbar, "subdiff_continuity_check");
  std::vector<double> deltas = delta_grid;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());

  CertificateReport rep;
  rep.check = "subdiff_continuity";
  rep.tolerance = 0.0;
  rep.params = {{"xbar", vec_json(xbar)}, {"xbar_star", vec_json(xbar_star)}, {"delta_grid", deltas}};
  rep.margin = kInf;
  auto found = nlohmann::json::object();
  bool all_found = true;
  for (double eps : {0.1, 0.01}) {
    std::optional<double> ok_delta;
    double best_slack = -kInf;
    Witness best_witness;
    for (double delta : deltas) {
      const Window w(Vec(xbar.begin(), xbar.end()), Vec(xbar_star.begin(), xbar_star.end()), delta, delta, kInf);
      const auto samples = graph_samples(phi, w, plan.around(xbar, delta), m, {.attentive = false});
      double worst = kInf;
      Witness wit;
      for (const auto& s : samples) {
        ++rep.tested;
        const double gap = std::abs(s.fx - fbar);
        // holds iff ε − |φ(x) − φ(x̄)| > 0
        const double slack = eps - gap;
        if (slack < worst) {
          worst = slack;
          wit = {{{"x", s.x}, {"xstar", s.xstar}, {"delta", delta}, {"eps", eps}}, eps, gap};
        }
      }
      if (worst > 0.0) {
        ok_delta = delta;
        best_slack = worst;
        break;
      }
      if (worst > best_slack || best_witness.inputs.is_null()) {
        best_slack = worst;
        best_witness = wit;
      }
    }
    found[eps == 0.1 ? "0.1" : "0.01"] = ok_delta ? nlohmann::json(*ok_delta) : nlohmann::json(nullptr);
    if (!ok_delta) {
      all_found = false;
      rep.witnesses.push_back(best_witness);
    }
    rep.margin = std::min(rep.margin, std::isfinite(best_slack) ? best_slack : kInf);
  }
  (void)tol;
  rep.result = {{"delta_for_eps", found}};
  rep.verdict = all_found ? Verdict::kCertified : Verdict::kRefuted;
  if (!all_found && rep.margin > 0.0) rep.margin = 0.0;
  return rep;
}

}  // namespace varcert
