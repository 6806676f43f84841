#include "varcert/varconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varcert/envelope.hpp"
#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"
#include "varcert/rng.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json vec_json(VecView v) { return Vec(v.begin(), v.end()); }

nlohmann::json window_json(const Window& w) {
  nlohmann::json j;
  to_json(j, w);
  return j;
}

Window recentered(const Window& w, VecView x, VecView xstar) {
  Window out = w;
  out.center_x.assign(x.begin(), x.end());
  out.center_xstar.assign(xstar.begin(), xstar.end());
  return out;
}

void require_member(const FunctionModel& phi, VecView x, VecView xstar, const char* what) {
  if (!phi.subdiff(x).contains(xstar, 1e-9)) {
    throw PreconditionError(std::string(what) + ": x̄* is not a subgradient of φ at x̄");
  }
}

struct Collect {
  WorstK worst;
  std::size_t tested = 0;
};

Collect merge(Collect a, const Collect& b) {
  a.worst.merge(b.worst);
  a.tested += b.tested;
  return a;
}

Vec uniform_point(Rng& rng, const Box& box) {
  Vec x(box.lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
  return x;
}

}  // namespace

CertificateReport certify_lower_estimate(const FunctionModel& phi, const std::vector<GraphSample>& samples,
                                         const std::vector<Vec>& points, double sigma, const NormModel& m,
                                         LowerKernel kernel, const Tolerances& tol) {
  std::vector<double> fx(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) fx[j] = phi.value(points[j]);
  const std::size_t np = points.size();
  const auto quad = [&](const GraphSample& s, const Vec& x) {
    return kernel == LowerKernel::kLyapunov ? m.lyapunov(s.x, x) : m.squared_distance(s.x, x);
  };
  const auto slack_of = [&](const GraphSample& s, std::size_t j) {
    const Vec& x = points[j];
    double lin = s.fx;
    for (std::size_t k = 0; k < x.size(); ++k) lin += s.xstar[k] * (x[k] - s.x[k]);
    return fx[j] - (lin + 0.5 * sigma * quad(s, x));
  };
  const Collect c = parallel_reduce(
      samples.size(), Collect{},
      [&](Collect& acc, std::size_t i) {
        for (std::size_t j = 0; j < np; ++j) {
          if (!std::isfinite(fx[j])) continue;
          ++acc.tested;
          acc.worst.offer(slack_of(samples[i], j), static_cast<std::uint64_t>(i) * np + j);
        }
      },
      merge);

  CertificateReport rep;
  rep.tolerance = tol.cert_tol;
  rep.tested = c.tested;
  rep.margin = c.worst.empty() ? kInf : c.worst.min_slack();
  for (const auto& e : c.worst.entries()) {
    const auto& s = samples[e.key / np];
    const auto& x = points[e.key % np];
    const double lhs = fx[e.key % np];
    rep.witnesses.push_back(
        {{{"u", s.x}, {"ustar", s.xstar}, {"fu", s.fx}, {"x", x}, {"sigma", sigma}}, lhs, lhs - e.slack});
  }
  settle(rep);
  return rep;
}

CertificateReport certify_variational_convexity(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                                double sigma, const Window& w_in, const NormModel& m,
                                                const SamplePlan& plan, const Tolerances& tol) {
  if (!(sigma >= 0.0)) throw InputError("certify_variational_convexity: σ must be nonnegative");
  const Window w = recentered(w_in, xbar, xbar_star);
  w.validate(phi.dim());
  require_member(phi, xbar, xbar_star, "certify_variational_convexity");
  const auto samples = graph_samples(phi, w, plan, m);
  const auto points = window_points(phi, w, plan, m);
  CertificateReport rep = certify_lower_estimate(phi, samples, points, sigma, m, LowerKernel::kLyapunov, tol);
  rep.check = sigma > 0.0 ? "strong_variational_convexity" : "variational_convexity";
  rep.params = {{"xbar", vec_json(xbar)}, {"xbar_star", vec_json(xbar_star)}, {"sigma", sigma},
                {"window", window_json(w)}, {"samples", samples.size()}, {"points", points.size()}};
  if (samples.empty()) rep.notes.push_back("no graph samples in the attentive window");
  if (std::isfinite(w.eps)) {
    const double level = phi.value(xbar) + w.eps;
    std::size_t boundary = 0;
    for (const auto& s : samples)
      if (std::abs(s.fx - level) <= tol.cert_tol) ++boundary;
    if (boundary > 0) {
      rep.result["boundary_samples"] = boundary;
      rep.notes.push_back(std::to_string(boundary) + " samples lie within tolerance of the level φ(x̄)+ε");
    }
  }
  return rep;
}

void to_json(nlohmann::json& j, const SigmaSearchResult& r) {
  j = {{"sigma", r.sigma},
       {"vc_at_zero", r.vc_at_zero},
       {"at_upper_bound", r.at_upper_bound},
       {"sigma_max", r.sigma_max},
       {"iterations", r.iterations}};
}

SigmaSearchResult sigma_search(const FunctionModel& phi, VecView xbar, VecView xbar_star, const Window& w_in,
                               const NormModel& m, const SamplePlan& plan, const Tolerances& tol,
                               double sigma_max, double resolution) {
  if (!(sigma_max > 0.0) || !(resolution > 0.0)) throw InputError("sigma_search: bad search range");
  const Window w = recentered(w_in, xbar, xbar_star);
  w.validate(phi.dim());
  require_member(phi, xbar, xbar_star, "sigma_search");
  const auto samples = graph_samples(phi, w, plan, m);
  const auto points = window_points(phi, w, plan, m);
  const auto passes = [&](double sigma) {
    return certify_lower_estimate(phi, samples, points, sigma, m, LowerKernel::kLyapunov, tol).certified();
  };
  SigmaSearchResult out;
  out.sigma_max = sigma_max;
  out.vc_at_zero = passes(0.0);
  if (!out.vc_at_zero) return out;
  if (passes(sigma_max)) {
    out.sigma = sigma_max;
    out.at_upper_bound = true;
    return out;
  }
  double lo = 0.0, hi = sigma_max;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
    ++out.iterations;
  }
  out.sigma = lo;
  return out;
}

FunctionModel build_hull_function(const std::vector<GraphSample>& samples, double sigma, const NormModel& m) {
  if (samples.empty()) throw InputError("build_hull_function: no samples");
  const std::size_t n = samples.front().x.size();
  require_dim(samples.front().x, m.dim(), "build_hull_function");
  struct Piece {
    double c;
    Vec g;
  };
  auto pieces = std::make_shared<std::vector<Piece>>();
  for (const auto& s : samples) {
    const Vec ju = m.duality_map(s.x);
    const double nu = m.norm(s.x);
    Piece p{s.fx - dot(s.xstar, s.x) + 0.5 * sigma * nu * nu, Vec(n)};
    for (std::size_t k = 0; k < n; ++k) p.g[k] = s.xstar[k] - sigma * ju[k];
    pieces->push_back(std::move(p));
  }
  const auto affine_max = [pieces](VecView x) {
    double best = -kInf;
    for (const auto& p : *pieces) best = std::max(best, p.c + dot(p.g, x));
    return best;
  };
  FunctionModel hull("hull", n, [affine_max, sigma, m](VecView x) {
    const double nx = m.norm(x);
    return affine_max(x) + 0.5 * sigma * nx * nx;
  });
  hull.with_subdiff([pieces, affine_max, sigma, m, n](VecView x) {
    const double top = affine_max(x);
    const double cut = top - 1e-9 * (1.0 + std::abs(top));
    std::vector<Vec> gens;
    for (const auto& p : *pieces)
      if (p.c + dot(p.g, x) >= cut) gens.push_back(p.g);
    std::sort(gens.begin(), gens.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    const Vec jx = m.duality_map(x);
    Vec shift(n);
    for (std::size_t k = 0; k < n; ++k) shift[k] = sigma * jx[k];
    return SubdiffSet::polyhedral(std::move(gens)).translated(shift);
  });
  ModelMeta meta;
  meta.is_convex = sigma >= 0.0;
  hull.with_meta(meta);
  std::vector<Vec> bps;
  for (const auto& s : samples) bps.push_back(s.x);
  hull.with_breakpoints(std::move(bps));
  hull.with_params({{"pieces", samples.size()}, {"sigma", sigma}});
  return hull;
}

CertificateReport verify_graph_agreement(const FunctionModel& phi, const FunctionModel& hull, const Window& w,
                                         const SamplePlan& plan, const NormModel& m, const Tolerances& tol) {
  w.validate(phi.dim());
  const auto forward = graph_samples(phi, w, plan, m);
  const auto backward = graph_samples(hull, w, plan, m, {.attentive = false});

  CertificateReport rep;
  rep.check = "graph_agreement";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"window", window_json(w)}, {"phi_samples", forward.size()}, {"hull_samples", backward.size()}};
  WorstK worst;
  std::vector<Witness> pending;
  std::size_t matched = 0;
  const double resolution = std::sqrt(tol.value_tol);
  const auto record = [&](Witness wit) {
    const double s = wit.slack();
    pending.push_back(std::move(wit));
    worst.offer(s, pending.size() - 1);
  };
  for (const auto& s : forward) {
    const double d = hull.subdiff(s.x).distance(s.xstar);
    const double dv = std::abs(hull.value(s.x) - s.fx);
    ++rep.tested;
    record({{{"direction", "phi_to_hull"}, {"x", s.x}, {"xstar", s.xstar}, {"subgradient_distance", d},
             {"value_gap", dv}},
            0.0,
            std::max(d, dv)});
  }
  for (const auto& s : backward) {
    const double fx = phi.value(s.x);
    if (!(std::abs(fx - s.fx) <= tol.value_tol)) continue;
    ++matched;
    const double d = phi.subdiff(s.x).distance(s.xstar);
    ++rep.tested;
    // value agreement within value_tol only locates x* to about √value_tol
    record({{{"direction", "hull_to_phi"}, {"x", s.x}, {"xstar", s.xstar}, {"subgradient_distance", d}},
            0.0,
            std::max(0.0, d - resolution)});
  }
  rep.margin = worst.empty() ? kInf : worst.min_slack();
  for (const auto& e : worst.entries()) rep.witnesses.push_back(pending[e.key]);
  rep.result = {{"hull_points_on_phi", matched}};
  settle(rep);
  return rep;
}

void to_json(nlohmann::json& j, const TransferReport& r) {
  nlohmann::json a, b;
  to_json(a, r.phi);
  to_json(b, r.psi);
  j = {{"phi", a}, {"psi", b}, {"agree", r.agree}};
}

TransferReport quadratic_shift_transfer(const FunctionModel& phi, double sigma, VecView xbar, VecView xbar_star,
                                        const Window& w_in, const NormModel& m, const SamplePlan& plan,
                                        const Tolerances& tol) {
  const Window w = recentered(w_in, xbar, xbar_star);
  w.validate(phi.dim());
  require_member(phi, xbar, xbar_star, "quadratic_shift_transfer");
  const auto samples = graph_samples(phi, w, plan, m);
  const auto points = window_points(phi, w, plan, m);

  TransferReport out;
  out.phi = certify_lower_estimate(phi, samples, points, sigma, m, LowerKernel::kLyapunov, tol);
  out.phi.check = "strong_variational_convexity";
  out.phi.params = {{"xbar", vec_json(xbar)}, {"xbar_star", vec_json(xbar_star)}, {"sigma", sigma},
                    {"window", window_json(w)}};

  const FunctionModel psi = quadratic_shift(phi, sigma, m);
  std::vector<GraphSample> sheared;
  sheared.reserve(samples.size());
  for (const auto& s : samples) {
    const Vec ju = m.duality_map(s.x);
    GraphSample t{s.x, s.xstar, psi.value(s.x)};
    for (std::size_t k = 0; k < ju.size(); ++k) t.xstar[k] -= sigma * ju[k];
    sheared.push_back(std::move(t));
  }
  const Vec jbar = m.duality_map(xbar);
  Vec center_star(xbar_star.begin(), xbar_star.end());
  for (std::size_t k = 0; k < center_star.size(); ++k) center_star[k] -= sigma * jbar[k];
  out.psi = certify_lower_estimate(psi, sheared, points, 0.0, m, LowerKernel::kLyapunov, tol);
  out.psi.check = "variational_convexity";
  out.psi.params = {{"xbar", vec_json(xbar)}, {"xbar_star", center_star}, {"sigma", 0.0},
                    {"shifted_by", sigma}};
  out.agree = out.phi.verdict == out.psi.verdict;
  return out;
}

CertificateReport polyak_strong_convexity_check(const FunctionModel& phi, double sigma, const Box& box,
                                                const SamplePlan& plan, const NormFn& norm,
                                                const Tolerances& tol) {
  if (box.lo.size() != phi.dim()) throw InputError("polyak_strong_convexity_check: box dimension mismatch");
  const std::size_t count = plan.qmc_points > 0 ? plan.qmc_points : 1000;
  struct Triple {
    Vec x, y;
    double t;
  };
  std::vector<Triple> triples;
  triples.reserve(count);
  Rng rng(plan.seed);
  for (std::size_t i = 0; i < count; ++i) {
    Vec x = uniform_point(rng, box);
    Vec y = uniform_point(rng, box);
    const double t = rng.uniform();
    triples.push_back({std::move(x), std::move(y), t});
  }
  const auto slack = [&](const Triple& tr, double& lhs, double& rhs) {
    const double fx = phi.value(tr.x), fy = phi.value(tr.y);
    if (!std::isfinite(fx) || !std::isfinite(fy)) return false;
    const Vec z = add(scaled(tr.x, tr.t), scaled(tr.y, 1.0 - tr.t));
    const double d = norm(sub(tr.x, tr.y));
    lhs = tr.t * fx + (1.0 - tr.t) * fy;
    rhs = phi.value(z) + 0.5 * sigma * tr.t * (1.0 - tr.t) * d * d;
    return true;
  };
  const Collect c = parallel_reduce(
      triples.size(), Collect{},
      [&](Collect& acc, std::size_t i) {
        double lhs, rhs;
        if (!slack(triples[i], lhs, rhs)) return;
        ++acc.tested;
        acc.worst.offer(lhs - rhs, i);
      },
      merge);
  CertificateReport rep;
  rep.check = "polyak_strong_convexity";
  rep.tolerance = tol.cert_tol;
  rep.tested = c.tested;
  rep.margin = c.worst.empty() ? kInf : c.worst.min_slack();
  rep.params = {{"sigma", sigma}, {"triples", count}, {"seed", plan.seed}};
  for (const auto& e : c.worst.entries()) {
    const auto& tr = triples[e.key];
    double lhs, rhs;
    slack(tr, lhs, rhs);
    rep.witnesses.push_back({{{"x", tr.x}, {"y", tr.y}, {"lambda", tr.t}}, lhs, rhs});
  }
  settle(rep);
  return rep;
}

CertificateReport shift_strong_convexity_check(const FunctionModel& phi, double sigma, const Box& box,
                                               const SamplePlan& plan, const NormFn& norm,
                                               const std::vector<PointPair>& extra_pairs,
                                               const Tolerances& tol) {
  if (box.lo.size() != phi.dim()) throw InputError("shift_strong_convexity_check: box dimension mismatch");
  std::vector<PointPair> pairs = extra_pairs;
  for (const auto& [x, y] : pairs) {
    require_dim(x, phi.dim(), "shift_strong_convexity_check");
    require_dim(y, phi.dim(), "shift_strong_convexity_check");
  }
  const std::size_t count = plan.qmc_points > 0 ? plan.qmc_points : 1000;
  Rng rng(plan.seed);
  for (std::size_t i = 0; i < count; ++i) {
    Vec x = uniform_point(rng, box);
    Vec y = uniform_point(rng, box);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  const auto psi = [&](VecView x) {
    const double nx = norm(x);
    return phi.value(x) - 0.5 * sigma * nx * nx;
  };
  const auto slack = [&](const PointPair& pr, double& lhs, double& rhs) {
    const double a = psi(pr.first), b = psi(pr.second);
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    lhs = 0.5 * (a + b);
    rhs = psi(scaled(add(pr.first, pr.second), 0.5));
    return true;
  };
  const Collect c = parallel_reduce(
      pairs.size(), Collect{},
      [&](Collect& acc, std::size_t i) {
        double lhs, rhs;
        if (!slack(pairs[i], lhs, rhs)) return;
        ++acc.tested;
        acc.worst.offer(lhs - rhs, i);
      },
      merge);
  CertificateReport rep;
  rep.check = "shift_strong_convexity";
  rep.tolerance = tol.cert_tol;
  rep.tested = c.tested;
  rep.margin = c.worst.empty() ? kInf : c.worst.min_slack();
  rep.params = {{"sigma", sigma}, {"pairs", count}, {"extra_pairs", extra_pairs.size()}, {"seed", plan.seed}};
  for (const auto& e : c.worst.entries()) {
    const auto& pr = pairs[e.key];
    double lhs, rhs;
    slack(pr, lhs, rhs);
    rep.witnesses.push_back({{{"x", pr.first}, {"y", pr.second}, {"lambda", 0.5}}, lhs, rhs});
  }
  auto extra = nlohmann::json::array();
  for (std::size_t i = 0; i < extra_pairs.size(); ++i) {
    double lhs = 0.0, rhs = 0.0;
    extra.push_back(slack(pairs[i], lhs, rhs) ? real_to_json(lhs - rhs) : nlohmann::json(nullptr));
  }
  rep.result = {{"extra_slacks", extra}};
  settle(rep);
  return rep;
}

namespace {

struct MidpointScan {
  double margin = kInf;
  double modulus = kInf;
  std::size_t tested = 0;
  WorstK worst;
  std::size_t skipped = 0;
};

std::vector<std::vector<std::size_t>> grid_indices(std::size_t n, std::size_t per_axis) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= per_axis;
  std::vector<std::vector<std::size_t>> out(total, std::vector<std::size_t>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (std::size_t k = n; k-- > 0;) {
      out[idx][k] = r % per_axis;
      r /= per_axis;
    }
  }
  return out;
}

std::size_t flat_index(const std::vector<std::size_t>& ix, std::size_t per_axis) {
  std::size_t f = 0;
  for (std::size_t v : ix) f = f * per_axis + v;
  return f;
}

MidpointScan midpoint_scan(const std::vector<Vec>& pts, const std::vector<double>& vals,
                           const std::vector<std::vector<std::size_t>>& idx, std::size_t per_axis, double mu,
                           const NormModel& m) {
  MidpointScan s;
  const std::size_t np = pts.size();
  std::vector<std::size_t> mid(idx.front().size());
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = a + 1; b < np; ++b) {
      bool even = true;
      for (std::size_t k = 0; k < mid.size() && even; ++k) {
        even = (idx[a][k] + idx[b][k]) % 2 == 0;
        mid[k] = (idx[a][k] + idx[b][k]) / 2;
      }
      if (!even) continue;
      const std::size_t c = flat_index(mid, per_axis);
      if (!std::isfinite(vals[a]) || !std::isfinite(vals[b]) || !std::isfinite(vals[c])) {
        ++s.skipped;
        continue;
      }
      const double d2 = m.squared_distance(pts[a], pts[b]);
      const double gap = 0.5 * (vals[a] + vals[b]) - vals[c];
      const double slack = gap - mu * d2 / 8.0;
      ++s.tested;
      s.modulus = std::min(s.modulus, 8.0 * gap / d2);
      s.margin = std::min(s.margin, slack);
      s.worst.offer(slack, a * np + b);
    }
  }
  return s;
}

}  // namespace

CertificateReport certify_envelope_convexity(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                             const std::vector<double>& lambdas, double sigma,
                                             const NormModel& m, const SamplePlan& plan,
                                             const EnvelopeConvexityOptions& opts, const Tolerances& tol) {
  const std::size_t n = phi.dim();
  require_dim(xbar, n, "certify_envelope_convexity");
  require_dim(xbar_star, n, "certify_envelope_convexity");
  if (!(sigma >= 0.0)) throw InputError("certify_envelope_convexity: σ must be nonnegative");
  if (sigma > 0.0 && !m.is_euclidean()) {
    throw CapabilityError("certify_envelope_convexity: strong envelope convexity requires the Euclidean norm");
  }
  if (lambdas.empty()) throw InputError("certify_envelope_convexity: empty λ list");
  if (!(opts.radius > 0.0)) throw InputError("certify_envelope_convexity: radius must be positive");
  const std::size_t per_axis = n == 1 ? (opts.grid | 1u) : 7;
  const auto idx = grid_indices(n, per_axis);
  std::vector<Vec> pts(idx.size(), Vec(n));
  const double h = 2.0 * opts.radius / static_cast<double>(per_axis - 1);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t k = 0; k < n; ++k)
      pts[i][k] = xbar[k] - opts.radius + h * static_cast<double>(idx[i][k]);

  CertificateReport rep;
  rep.check = "envelope_convexity";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"xbar", vec_json(xbar)}, {"xbar_star", vec_json(xbar_star)}, {"lambdas", lambdas},
                {"sigma", sigma}, {"radius", opts.radius}, {"grid", per_axis}};
  rep.margin = kInf;
  auto per_lambda = nlohmann::json::array();
  std::vector<std::pair<double, Witness>> candidates;
  bool all_agree = true;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw InputError("certify_envelope_convexity: λ must be positive");
    const double mu = sigma / (1.0 + sigma * lambda);
    const auto vals = parallel_map<double>(pts.size(), [&](std::size_t i) {
      return tilted_envelope(phi, lambda, xbar_star, pts[i], plan, m, tol).value;
    });
    const MidpointScan s = midpoint_scan(pts, vals, idx, per_axis, mu, m);
    nlohmann::json row = {{"lambda", lambda},
                          {"target_modulus", mu},
                          {"modulus", real_to_json(s.modulus)},
                          {"margin", real_to_json(s.margin)}};
    const bool ok = s.tested > 0 && s.margin >= -tol.cert_tol;
    if (m.is_euclidean()) {
      std::vector<Vec> shifted(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) shifted[i] = axpy(pts[i], lambda, xbar_star);
      const auto uvals = parallel_map<double>(shifted.size(), [&](std::size_t i) {
        return moreau_envelope(phi, lambda, shifted[i], plan, m, tol).value;
      });
      const MidpointScan u = midpoint_scan(shifted, uvals, idx, per_axis, mu, m);
      const bool uok = u.tested > 0 && u.margin >= -tol.cert_tol;
      row["untilted_modulus"] = real_to_json(u.modulus);
      row["untilted_agrees"] = uok == ok;
      if (uok != ok) {
        all_agree = false;
        rep.notes.push_back("tilted and untilted envelope verdicts differ at λ=" + std::to_string(lambda));
      }
    }
    if (s.skipped > 0) rep.notes.push_back(std::to_string(s.skipped) + " midpoint pairs had a non-finite envelope");
    per_lambda.push_back(row);
    rep.tested += s.tested;
    rep.margin = std::min(rep.margin, s.margin);
    const std::size_t np = pts.size();
    for (const auto& e : s.worst.entries()) {
      const std::size_t a = e.key / np, b = e.key % np;
      const double lhs = 0.5 * (vals[a] + vals[b]);
      candidates.push_back(
          {e.slack, {{{"lambda", lambda}, {"x", pts[a]}, {"y", pts[b]}, {"modulus", mu}}, lhs, lhs - e.slack}});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < candidates.size() && i < kMaxWitnesses; ++i)
    rep.witnesses.push_back(candidates[i].second);
  rep.result = {{"per_lambda", per_lambda}, {"untilted_agrees", all_agree}};
  settle(rep);
  return rep;
}

}  // namespace varcert
