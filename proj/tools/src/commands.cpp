#include <chrono>
#include <cmath>
#include <sstream>

#include "varcert/varcert.hpp"
#include "varcert_cli/cli.hpp"
#include "varcert_cli/suite.hpp"

namespace varcert::cli {

namespace {

const std::vector<double> kDefaultDeltas = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
const std::vector<double> kDefaultLambdas = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

struct Context {
  FunctionModel phi;
  NormModel norm;
  Vec center;
  Vec cstar;
  Window window;
};

Context make_context(const RunConfig& cfg) {
  FunctionModel phi = resolve_model(cfg.model);
  const std::size_t n = phi.dim();
  NormModel norm(cfg.p, n, cfg.weights.empty() ? Vec{} : broadcast(cfg.weights, n, "--weights"));
  Vec center = broadcast(cfg.center, n, "--center");
  Vec cstar = broadcast(cfg.cstar, n, "--cstar");
  Window w(center, cstar, cfg.r1, cfg.r2, cfg.eps);
  return {std::move(phi), std::move(norm), std::move(center), std::move(cstar), std::move(w)};
}

SamplePlan make_plan(const RunConfig& cfg, const Box& fallback) {
  SamplePlan plan(cfg.seed, cfg.grid, cfg.qmc, cfg.box ? *cfg.box : fallback);
  if (plan.box.dim() != fallback.dim()) {
    if (plan.box.dim() == 1) {
      plan.box = Box(Vec(fallback.dim(), plan.box.lo[0]), Vec(fallback.dim(), plan.box.hi[0]));
    } else {
      throw InputError("--box: dimension does not match the model");
    }
  }
  plan.validate();
  return plan;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

nlohmann::json report_body(const CertificateReport& r) {
  nlohmann::json j;
  to_json(j, r);
  return j;
}

CommandOutput from_report(const CertificateReport& r) {
  CommandOutput out;
  out.verdict = to_string(r.verdict);
  out.body = report_body(r);
  out.table = {{"index", "slack", "lhs", "rhs", "inputs"}};
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    const auto& w = r.witnesses[i];
    out.table.push_back({std::to_string(i), fmt(w.slack()), fmt(w.lhs), fmt(w.rhs), w.inputs.dump()});
  }
  return out;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::kRefuted || b == Verdict::kRefuted) return Verdict::kRefuted;
  if (a == Verdict::kVacuous && b == Verdict::kVacuous) return Verdict::kVacuous;
  return Verdict::kCertified;
}

void modulus_table(CommandOutput& out, const nlohmann::json& table, const std::vector<std::string>& cols) {
  out.table = {cols};
  for (const auto& row : table) {
    std::vector<std::string> line;
    for (const auto& c : cols) {
      const auto& v = row.at(c);
      line.push_back(v.is_number() ? fmt(v.get<double>()) : v.dump());
    }
    out.table.push_back(std::move(line));
  }
}

CommandOutput cmd_envelope(const RunConfig& cfg, bool prox) {
  Context c = make_context(cfg);
  const std::size_t n = c.phi.dim();
  const Vec x = broadcast(cfg.param_list("x", cfg.center), n, "--x");
  const double lambda = cfg.param("lambda", 1.0);
  if (!(lambda > 0.0)) throw InputError("--lambda must be positive");
  const SamplePlan plan = make_plan(cfg, Box::around(x, 4.0));
  EnvelopeResult r;
  if (cfg.params.contains("xstar")) {
    const Vec xs = broadcast(cfg.param_list("xstar", {0.0}), n, "--xstar");
    r = tilted_envelope(c.phi, lambda, xs, x, plan, c.norm, cfg.tolerances);
  } else {
    r = moreau_envelope(c.phi, lambda, x, plan, c.norm, cfg.tolerances);
  }
  CommandOutput out;
  nlohmann::json rj;
  to_json(rj, r);
  out.body = {{"result", rj}, {"check", prox ? "proximal_map" : "moreau_envelope"}};
  out.table = {{"index", "minimizer"}};
  for (std::size_t i = 0; i < r.minimizers.size(); ++i)
    out.table.push_back({std::to_string(i), nlohmann::json(r.minimizers[i]).dump()});
  if (!prox) out.table = {{"value"}, {fmt(r.value)}};
  return out;
}

CommandOutput cmd_certify(const RunConfig& cfg, const std::string& which) {
  if (which == "epi") {
    const EpiProblem prob = epi_problem_lookup(cfg.param("problem", std::string("offset_quadratic")));
    FunctionSequence seq = prob.seq;
    seq.terms = static_cast<std::size_t>(cfg.param("terms", 10000.0));
    const bool recovery = cfg.params.value("recovery", prob.needs_recovery);
    const SamplePlan plan = make_plan(cfg, Box::cube(seq.dim, -1.0, 1.0));
    CertificateReport a = epi_convergence_check(seq, prob.limit, plan, default_paths(recovery), cfg.tolerances);
    const CertificateReport b = argmin_limsup_check(seq, prob.limit, plan, cfg.tolerances);
    a.verdict = combine(a.verdict, b.verdict);
    a.result["argmin"] = report_body(b);
    return from_report(a);
  }

  Context c = make_context(cfg);
  const Box window_box = Box::around(c.center, cfg.r1);
  const Tolerances& tol = cfg.tolerances;

  if (which == "vc" || which == "svc") {
    const double sigma = which == "vc" ? 0.0 : cfg.param("sigma", 1.0);
    const SamplePlan plan = make_plan(cfg, window_box);
    return from_report(certify_variational_convexity(c.phi, c.center, c.cstar, sigma, c.window, c.norm, plan, tol));
  }
  if (which == "mono") {
    const SamplePlan plan = make_plan(cfg, window_box);
    const MonoKind kind = mono_kind_from_string(cfg.param("kind", std::string("duality")));
    CertificateReport r = local_mono_certify(c.phi, c.window, cfg.param("sigma", 0.0), kind, plan, c.norm, tol);
    if (!cfg.params.contains("lambda")) return from_report(r);
    const CertificateReport res = resolvent_probe(c.phi, cfg.param("lambda", 1.0), c.window, c.norm, plan, tol);
    r.verdict = combine(r.verdict, res.verdict);
    r.result["resolvent"] = report_body(res);
    CommandOutput out = from_report(r);
    modulus_table(out, res.result.at("modulus_table"), {"y1", "y2", "x1", "x2", "ratio"});
    return out;
  }
  if (which == "proxreg") {
    const SamplePlan plan = make_plan(cfg, window_box);
    return from_report(prox_regularity_certify(c.phi, c.center, c.cstar, c.window, plan, c.norm, tol));
  }
  if (which == "subdiffcont") {
    const SamplePlan plan = make_plan(cfg, window_box);
    return from_report(subdiff_continuity_check(c.phi, c.center, c.cstar, cfg.param_list("deltas", kDefaultDeltas),
                                                plan, c.norm, tol));
  }
  if (which == "proxsub") {
    const SamplePlan plan = make_plan(cfg, window_box);
    return from_report(proximal_subgradient_check(c.phi, c.center, c.cstar, plan, c.norm, tol));
  }
  if (which == "psd") {
    const SamplePlan plan = make_plan(cfg, window_box);
    const auto flavor = flavor_from_string(cfg.param("flavor", std::string("combined")));
    return from_report(psd_certify(c.phi, c.window, cfg.param("sigma", 0.0), plan, c.norm, flavor, tol));
  }
  if (which == "pointbased") {
    const SamplePlan plan = make_plan(cfg, window_box);
    return from_report(pointbased_check(c.phi, c.center, plan, tol));
  }
  if (which == "tilt") {
    const Box u_box = Box::around(c.center, cfg.param("u_radius", 0.5));
    const SamplePlan plan = make_plan(cfg, u_box);
    const CertificateReport r =
        tilt_stability_certify(c.phi, c.center, u_box, cfg.param("v_radius", 0.2), plan, c.norm, tol);
    CommandOutput out = from_report(r);
    modulus_table(out, r.result.at("modulus_table"), {"tilt1", "tilt2", "displacement", "ratio"});
    return out;
  }
  if (which == "growth") {
    const SamplePlan plan = make_plan(cfg, window_box);
    return from_report(second_order_growth_check(c.phi, c.window, cfg.param("sigma", 0.0), plan, c.norm, tol));
  }
  throw InputError("unknown certify subcommand '" + which + "'");
}

CommandOutput cmd_hull(const RunConfig& cfg, const std::string& which) {
  Context c = make_context(cfg);
  const SamplePlan plan = make_plan(cfg, Box::around(c.center, cfg.r1));
  const double sigma = cfg.param("sigma", 0.0);
  const auto samples = graph_samples(c.phi, c.window, plan, c.norm);
  if (samples.empty()) throw PreconditionError("hull: no graph samples in the window");
  const FunctionModel hull = build_hull_function(samples, sigma, c.norm);
  if (which == "check") return from_report(verify_graph_agreement(c.phi, hull, c.window, plan, c.norm, cfg.tolerances));
  if (which != "build") throw InputError("unknown hull subcommand '" + which + "'");
  CommandOutput out;
  auto pieces = nlohmann::json::array();
  for (const auto& s : samples) {
    nlohmann::json sj;
    to_json(sj, s);
    pieces.push_back(sj);
  }
  auto values = nlohmann::json::array();
  out.table = {{"x", "phi", "hull"}};
  for (const auto& x : window_points(c.phi, c.window, plan, c.norm)) {
    const double fx = c.phi.value(x), hx = hull.value(x);
    values.push_back({{"x", x}, {"phi", fx}, {"hull", hx}});
    out.table.push_back({nlohmann::json(x).dump(), fmt(fx), fmt(hx)});
  }
  out.body = {{"check", "hull_build"}, {"result", {{"sigma", sigma}, {"pieces", pieces}, {"values", values}}}};
  return out;
}

CommandOutput cmd_gallery(const RunConfig& cfg, const std::string& which) {
  CommandOutput out;
  if (which == "list") {
    auto models_j = nlohmann::json::array();
    out.table = {{"name", "dim", "convex"}};
    for (const auto& name : gallery_names()) {
      const FunctionModel phi = gallery_lookup(name);
      nlohmann::json meta;
      to_json(meta, phi.meta());
      models_j.push_back({{"name", name}, {"dim", phi.dim()}, {"params", phi.params()}, {"meta", meta}});
      out.table.push_back({name, std::to_string(phi.dim()), phi.meta().is_convex ? "true" : "false"});
    }
    out.body = {{"check", "gallery_list"}, {"result", {{"models", models_j}}}};
    return out;
  }
  if (which != "verify") throw InputError("unknown gallery subcommand '" + which + "'");
  std::vector<std::string> names;
  if (cfg.params.contains("name")) {
    names.push_back(cfg.param("name", std::string()));
  } else {
    names = suite_models();
  }
  auto cases = nlohmann::json::array();
  bool all = true;
  out.table = {{"model", "check", "expected", "observed", "margin"}};
  for (const auto& name : names) {
    for (const auto& sc : run_gallery_suite(name, cfg.seed)) {
      all = all && sc.matches();
      cases.push_back({{"model", sc.model},
                       {"check", sc.label},
                       {"expected", to_string(sc.expected)},
                       {"observed", to_string(sc.observed)},
                       {"margin", real_to_json(sc.margin)},
                       {"matches", sc.matches()}});
      out.table.push_back({sc.model, sc.label, to_string(sc.expected), to_string(sc.observed), fmt(sc.margin)});
    }
  }
  out.verdict = all ? to_string(Verdict::kCertified) : to_string(Verdict::kRefuted);
  out.body = {{"check", "gallery_verify"}, {"result", {{"cases", cases}, {"all_match", all}}}};
  return out;
}

CommandOutput cmd_estimate(const RunConfig& cfg, const std::string& which) {
  CommandOutput out;
  if (which == "c1") {
    const auto n = static_cast<std::size_t>(cfg.param("dim", 1.0));
    NormModel norm(cfg.p, n, cfg.weights.empty() ? Vec{} : broadcast(cfg.weights, n, "--weights"));
    SamplePlan plan = make_plan(cfg, Box::cube(n, -1.0, 1.0));
    if (plan.qmc_points == 0) plan.qmc_points = 10000;
    const ModulusEstimate e = estimate_strong_mono_modulus(norm, plan);
    out.body = {{"check", "estimate_c1"},
                {"result", {{"c1", e.value}, {"x", e.argmin_x}, {"y", e.argmin_y}, {"pairs", e.pairs}}}};
    out.table = {{"c1", "pairs"}, {fmt(e.value), std::to_string(e.pairs)}};
    return out;
  }
  if (which != "lambda0") throw InputError("unknown estimate subcommand '" + which + "'");
  Context c = make_context(cfg);
  const SamplePlan plan = make_plan(cfg, Box::around(c.center, 4.0));
  const LambdaThreshold t =
      prox_bound_threshold(c.phi, plan, cfg.param_list("lambdas", kDefaultLambdas), c.norm, cfg.tolerances);
  nlohmann::json tj;
  to_json(tj, t);
  out.body = {{"check", "estimate_lambda0"}, {"result", tj}};
  out.table = {{"lambda", "value", "finite"}};
  for (const auto& p : t.probes) out.table.push_back({fmt(p.lambda), fmt(p.value), p.finite ? "true" : "false"});
  return out;
}

}  // namespace

CommandOutput execute(const RunConfig& cfg) {
  std::istringstream words(cfg.command);
  std::string head, sub;
  words >> head >> sub;
  if (head == "envelope") return cmd_envelope(cfg, false);
  if (head == "prox") return cmd_envelope(cfg, true);
  if (head == "certify") return cmd_certify(cfg, sub);
  if (head == "hull") return cmd_hull(cfg, sub);
  if (head == "gallery") return cmd_gallery(cfg, sub);
  if (head == "estimate") return cmd_estimate(cfg, sub);
  throw InputError("unknown command '" + cfg.command + "'");
}

int exit_code_for(const std::string& verdict) { return verdict == to_string(Verdict::kRefuted) ? 1 : 0; }

nlohmann::json make_report(const RunConfig& cfg, const CommandOutput& out, double elapsed_seconds) {
  nlohmann::json rep = {{"schema_version", kSchemaVersion}, {"command", cfg.command}};
  rep["config"] = cfg;
  for (auto it = out.body.begin(); it != out.body.end(); ++it) rep[it.key()] = it.value();
  rep["verdict"] = out.verdict;
  const auto now = std::chrono::system_clock::now();
  rep["timing"] = {{"elapsed_seconds", elapsed_seconds},
                   {"finished_unix", std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()}};
  return rep;
}

nlohmann::json strip_timing(nlohmann::json report) {
  report.erase("timing");
  return report;
}

}  // namespace varcert::cli
