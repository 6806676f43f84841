#include "varcert/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"
#include "varcert/varconvex.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

EnvelopeResult tilt_map(const FunctionModel& phi, const Box& u_box, VecView xstar, const SamplePlan& plan,
                        const Tolerances& tol) {
  require_dim(xstar, phi.dim(), "tilt_map");
  if (u_box.lo.size() != phi.dim()) throw InputError("tilt_map: box dimension mismatch");
  std::vector<Vec> extra;
  for (const auto& b : phi.breakpoints())
    if (u_box.contains(b)) extra.push_back(b);
  MinimizeOptions opts;
  opts.value_tol = tol.value_tol;
  const Vec ts(xstar.begin(), xstar.end());
  return minimize_on_box([&](VecView x) { return phi.value(x) - dot(ts, x); }, plan.with_box(u_box), extra, opts);
}

CertificateReport tilt_stability_certify(const FunctionModel& phi, VecView xbar, const Box& u_box,
                                         double v_radius, const SamplePlan& plan, const NormModel& m,
                                         const Tolerances& tol) {
  const std::size_t n = phi.dim();
  require_dim(xbar, n, "tilt_stability_certify");
  if (!(v_radius > 0.0)) throw InputError("tilt_stability_certify: V radius must be positive");
  if (!u_box.contains(xbar)) throw PreconditionError("tilt_stability_certify: x̄ is not in the U box");
  if (phi.has_subdiff() && !phi.subdiff(xbar).contains(Vec(n, 0.0), 1e-9)) {
    throw PreconditionError("tilt_stability_certify: 0 ∉ ∂φ(x̄)");
  }

  // lines[k][i] is the tilt v_radius·(i − 10)/11 along axis k
  std::vector<Vec> tilts;
  tilts.push_back(Vec(n, 0.0));
  std::vector<std::vector<std::size_t>> lines(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = -10; i <= 10; ++i) {
      if (i == 0) {
        lines[k].push_back(0);
        continue;
      }
      Vec t(n, 0.0);
      t[k] = v_radius * static_cast<double>(i) / 11.0;
      lines[k].push_back(tilts.size());
      tilts.push_back(std::move(t));
    }
  }
  const auto maps = parallel_map<EnvelopeResult>(
      tilts.size(), [&](std::size_t i) { return tilt_map(phi, u_box, tilts[i], plan, tol); });

  CertificateReport rep;
  rep.check = "tilt_stability";
  rep.tolerance = 0.0;
  nlohmann::json bj;
  to_json(bj, u_box);
  rep.params = {{"xbar", Vec(xbar.begin(), xbar.end())}, {"u_box", bj}, {"v_radius", v_radius},
                {"tilts", tilts.size()}};
  rep.tested = tilts.size();
  rep.margin = kInf;
  std::vector<std::pair<double, Witness>> failures;
  const auto fail = [&](double slack, Witness w) { failures.push_back({slack, std::move(w)}); };

  // (a) M(0) = {x̄}
  const EnvelopeResult& m0 = maps[0];
  double d0 = 0.0;
  for (const auto& x : m0.minimizers) d0 = std::max(d0, m.distance(x, xbar));
  if (m0.minimizers.empty()) d0 = kInf;
  {
    const double slack = tol.cluster_tol - d0;
    rep.margin = std::min(rep.margin, slack);
    if (slack < 0.0) fail(slack, {{{"check", "argmin_at_zero"}, {"minimizers", m0.minimizers}}, tol.cluster_tol, d0});
  }
  // (b) single interior clusters
  bool interior = true;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& r = maps[i];
    const double diam = r.minimizers.empty() ? kInf : r.cluster_diameter();
    const double slack = tol.cluster_tol - diam;
    rep.margin = std::min(rep.margin, slack);
    if (slack < 0.0) {
      fail(slack, {{{"check", "single_valued"}, {"xstar", tilts[i]}, {"minimizers", r.minimizers}},
                   tol.cluster_tol, diam});
    }
    if (r.diagnostics.boundary_hit) {
      interior = false;
      rep.margin = std::min(rep.margin, 0.0);
      fail(-tol.cluster_tol, {{{"check", "interior"}, {"xstar", tilts[i]}, {"minimizers", r.minimizers}}, 0.0,
                              tol.cluster_tol});
    }
  }
  // (c) modulus over adjacent tilts
  double modulus = 0.0;
  auto table = nlohmann::json::array();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i + 1 < lines[k].size(); ++i) {
      const std::size_t a = lines[k][i], b = lines[k][i + 1];
      if (maps[a].minimizers.empty() || maps[b].minimizers.empty()) continue;
      const Vec& xa = maps[a].minimizers.front();
      const Vec& xb = maps[b].minimizers.front();
      const double disp = m.distance(xa, xb);
      const double ratio = disp / m.dual_distance(tilts[a], tilts[b]);
      modulus = std::max(modulus, ratio);
      table.push_back({{"tilt1", tilts[a]}, {"tilt2", tilts[b]}, {"displacement", disp}, {"ratio", ratio}});
    }
  }
  if (modulus > kMaxTiltModulus) {
    rep.margin = std::min(rep.margin, kMaxTiltModulus - modulus);
    fail(kMaxTiltModulus - modulus, {{{"check", "modulus"}}, kMaxTiltModulus, modulus});
  }
  std::stable_sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < failures.size() && i < kMaxWitnesses; ++i) rep.witnesses.push_back(failures[i].second);
  rep.result = {{"modulus", modulus}, {"modulus_table", table}, {"interior", interior}};
  rep.verdict = failures.empty() ? Verdict::kCertified : Verdict::kRefuted;
  return rep;
}

CertificateReport second_order_growth_check(const FunctionModel& phi, const Window& w, double sigma,
                                            const SamplePlan& plan, const NormModel& m, const Tolerances& tol) {
  if (!(sigma >= 0.0)) throw InputError("second_order_growth_check: σ must be nonnegative");
  w.validate(phi.dim());
  const auto samples = graph_samples(phi, w, plan, m);
  const auto points = window_points(phi, w, plan, m);
  CertificateReport rep =
      certify_lower_estimate(phi, samples, points, sigma, m, LowerKernel::kSquaredDistance, tol);
  rep.check = "second_order_growth";
  nlohmann::json wj;
  to_json(wj, w);
  rep.params = {{"window", wj}, {"sigma", sigma}, {"samples", samples.size()}, {"points", points.size()}};
  if (samples.empty()) rep.notes.push_back("no graph samples in the attentive window");
  return rep;
}

}  // namespace varcert
