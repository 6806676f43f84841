#include "varcert/envelope.hpp"

#include <cmath>
#include <limits>

#include "varcert/errors.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MinimizeOptions options_from(const Tolerances& tol) {
  MinimizeOptions o;
  o.value_tol = tol.value_tol;
  return o;
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("envelope: λ must be a positive real");
}

std::vector<Vec> extra_points(const FunctionModel& phi, VecView x) {
  std::vector<Vec> extra = phi.breakpoints();
  extra.emplace_back(x.begin(), x.end());
  return extra;
}

// The model itself guarantees a finite envelope for this λ.
bool certified_finite(const FunctionModel& phi, double lambda) {
  const auto& pb = phi.meta().prox_bounded;
  if (!pb) return false;
  return pb->alpha >= 0.0 || 1.0 / (2.0 * lambda) > -pb->alpha;
}

EnvelopeResult envelope_search(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan,
                               const NormModel& m, const Tolerances& tol) {
  const Vec xv(x.begin(), x.end());
  const auto objective = [&phi, &m, &xv, lambda](VecView w) {
    const double v = phi.value(w);
    if (!std::isfinite(v)) return v;
    return v + m.squared_distance(w, xv) / (2.0 * lambda);
  };
  return minimize_on_box(objective, plan, extra_points(phi, x), options_from(tol));
}

}  // namespace

EnvelopeResult moreau_envelope(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan,
                               const NormModel& m, const Tolerances& tol) {
  check_lambda(lambda);
  require_dim(x, phi.dim(), "moreau_envelope");
  if (m.dim() != phi.dim()) throw InputError("moreau_envelope: norm and model dimensions differ");
  EnvelopeResult res = envelope_search(phi, lambda, x, plan, m, tol);
  if (!std::isfinite(res.value)) return res;
  if (!res.diagnostics.boundary_hit && certified_finite(phi, lambda)) return res;
  double prev = res.value;
  SamplePlan grown = plan;
  for (int d = 0; d < kUnboundedDoublings; ++d) {
    grown = grown.with_box(grown.box.scaled(2.0));
    const EnvelopeResult r = envelope_search(phi, lambda, x, grown, m, tol);
    if (!(prev - r.value > kUnboundedDrop)) return res;
    prev = r.value;
  }
  res.value = -kInf;
  res.minimizers.clear();
  res.diagnostics.unbounded_suspected = true;
  return res;
}

EnvelopeResult moreau_envelope(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan) {
  return moreau_envelope(phi, lambda, x, plan, NormModel::euclidean(phi.dim()));
}

EnvelopeResult proximal_map(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan,
                            const NormModel& m, const Tolerances& tol) {
  return moreau_envelope(phi, lambda, x, plan, m, tol);
}

EnvelopeResult tilted_envelope(const FunctionModel& phi, double lambda, VecView xstar, VecView x,
                               const SamplePlan& plan, const NormModel& m, const Tolerances& tol) {
  require_dim(xstar, phi.dim(), "tilted_envelope");
  return moreau_envelope(tilted(phi, xstar), lambda, x, plan, m, tol);
}

EnvelopeResult tilted_prox(const FunctionModel& phi, double lambda, VecView xstar, VecView x,
                           const SamplePlan& plan, const NormModel& m, const Tolerances& tol) {
  return tilted_envelope(phi, lambda, xstar, x, plan, m, tol);
}

Vec envelope_gradient(const FunctionModel& phi, double lambda, VecView xstar_bar, VecView x,
                      const NormModel& m, const SamplePlan& plan, const Tolerances& tol) {
  const EnvelopeResult p = tilted_prox(phi, lambda, xstar_bar, x, plan, m, tol);
  if (!p.single_valued(tol.cluster_tol)) {
    throw NonSmoothError("envelope_gradient: tilted prox is not single-valued (diameter " +
                             std::to_string(p.cluster_diameter()) + ")",
                         p.minimizers);
  }
  return scaled(m.duality_map(sub(x, p.minimizers.front())), 1.0 / lambda);
}

void to_json(nlohmann::json& j, const LambdaThreshold& t) {
  auto probes = nlohmann::json::array();
  for (const auto& p : t.probes) {
    probes.push_back({{"lambda", p.lambda}, {"value", real_to_json(p.value)}, {"finite", p.finite}});
  }
  j = {{"lambda0_lower", t.lambda0_lower},
       {"lambda0_upper", real_to_json(t.lambda0_upper)},
       {"bracket_valid", t.bracket_valid},
       {"probes", probes}};
}

LambdaThreshold prox_bound_threshold(const FunctionModel& phi, const SamplePlan& plan,
                                     const std::vector<double>& lambda_grid, const NormModel& m,
                                     const Tolerances& tol) {
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw InputError("prox_bound_threshold: λ grid must be sorted ascending");
  }
  constexpr int kMaxDoublings = 12;
  LambdaThreshold out;
  out.lambda0_upper = kInf;
  const Vec x = plan.box.center();
  for (double lambda : lambda_grid) {
    check_lambda(lambda);
    LambdaProbe probe{lambda, 0.0, true};
    SamplePlan grown = plan;
    double prev = envelope_search(phi, lambda, x, grown, m, tol).value;
    probe.value = prev;
    int run = 0;
    for (int d = 0; d < kMaxDoublings && run < kUnboundedDoublings; ++d) {
      grown = grown.with_box(grown.box.scaled(2.0));
      const double v = envelope_search(phi, lambda, x, grown, m, tol).value;
      run = prev - v > kUnboundedDrop ? run + 1 : 0;
      prev = v;
    }
    if (run >= kUnboundedDoublings) {
      probe.finite = false;
      probe.value = -kInf;
      out.lambda0_upper = std::min(out.lambda0_upper, lambda);
    } else {
      probe.value = prev;
    }
    out.probes.push_back(probe);
  }
  for (const auto& p : out.probes)
    if (p.finite && p.lambda < out.lambda0_upper) out.lambda0_lower = std::max(out.lambda0_lower, p.lambda);
  out.bracket_valid = out.lambda0_lower > 0.0 && std::isfinite(out.lambda0_upper) &&
                      out.lambda0_lower <= out.lambda0_upper;
  return out;
}

CertificateReport check_shift_identity(const FunctionModel& phi, double sigma, double lambda, VecView x,
                                       const SamplePlan& plan, const NormModel& m, const Tolerances& tol) {
  if (!m.is_euclidean()) throw CapabilityError("check_shift_identity: requires the Euclidean norm (p = 2)");
  if (sigma == 0.0 || !std::isfinite(sigma)) throw InputError("check_shift_identity: σ must be nonzero");
  if (!(lambda > 0.0) || !(lambda < 1.0 / std::abs(sigma))) {
    throw InputError("check_shift_identity: λ must lie in (0, 1/|σ|)");
  }
  const double s = 1.0 + sigma * lambda;
  const FunctionModel psi = quadratic_shift(phi, sigma, m);
  const Vec xs = scaled(x, 1.0 / s);
  const double nx = m.norm(x);
  const EnvelopeResult lhs = moreau_envelope(phi, lambda, x, plan, m, tol);
  const EnvelopeResult rhs_env = moreau_envelope(psi, lambda / s, xs, plan, m, tol);
  const double rhs = rhs_env.value + sigma / (2.0 * s) * nx * nx;

  CertificateReport rep;
  rep.check = "shift_identity";
  rep.tolerance = tol.cert_tol;
  rep.tested = 1;
  const double gap = std::abs(lhs.value - rhs);
  rep.margin = std::isfinite(gap) ? -gap : -kInf;
  if (lhs.value == rhs) rep.margin = 0.0;
  // equality check: the witness inequality is −|lhs − rhs| >= 0
  rep.witnesses.push_back({{{"x", Vec(x.begin(), x.end())},
                            {"envelope", real_to_json(lhs.value)},
                            {"shifted_side", real_to_json(rhs)}},
                           rep.margin,
                           0.0});
  rep.params = {{"sigma", sigma}, {"lambda", lambda}, {"x", Vec(x.begin(), x.end())}};
  rep.result = {{"lhs", real_to_json(lhs.value)},
                {"rhs", real_to_json(rhs)},
                {"shifted_lambda", lambda / s},
                {"shifted_x", xs}};
  settle(rep);
  return rep;
}

}  // namespace varcert
