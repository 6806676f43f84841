#include "varcert/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"
#include "varcert/rng.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using PairKernel = std::function<double(std::size_t, std::size_t)>;

PairGap scan_pairs(const std::vector<GraphSample>& samples, const PairKernel& kernel, std::uint64_t seed) {
  const std::size_t n = samples.size();
  if (n < 2) throw InputError("pair gap: at least two samples are required");
  const std::size_t total = n * (n - 1) / 2;

  std::vector<std::pair<std::size_t, std::size_t>> subsample;
  if (total > kMaxPairs) {
    Rng rng(seed);
    subsample.reserve(kMaxPairs);
    while (subsample.size() < kMaxPairs) {
      std::size_t a = rng.below(n), b = rng.below(n);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      subsample.emplace_back(a, b);
    }
  }

  WorstK worst;
  if (subsample.empty()) {
    worst = parallel_reduce(
        n, WorstK{}, [&](WorstK& acc, std::size_t i) {
          for (std::size_t j = i + 1; j < n; ++j) acc.offer(kernel(i, j), i * n + j);
        },
        [](WorstK a, const WorstK& b) {
          a.merge(b);
          return a;
        });
  } else {
    worst = parallel_reduce(
        subsample.size(), WorstK{}, [&](WorstK& acc, std::size_t t) {
          const auto [i, j] = subsample[t];
          acc.offer(kernel(i, j), i * n + j);
        },
        [](WorstK a, const WorstK& b) {
          a.merge(b);
          return a;
        });
  }

  PairGap out;
  out.pairs = subsample.empty() ? total : subsample.size();
  for (const auto& e : worst.entries()) {
    const std::size_t i = e.key / n, j = e.key % n;
    if (out.worst.empty() || out.worst.back() != std::pair{i, j}) out.worst.emplace_back(i, j);
  }
  out.gap = worst.min_slack();
  out.i = out.worst.front().first;
  out.j = out.worst.front().second;
  return out;
}

double base_gap(const GraphSample& a, const GraphSample& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k) s += (a.xstar[k] - b.xstar[k]) * (a.x[k] - b.x[k]);
  return s;
}

}  // namespace

PairGap monotone_gap(const std::vector<GraphSample>& samples, std::uint64_t seed) {
  return scan_pairs(
      samples, [&](std::size_t i, std::size_t j) { return base_gap(samples[i], samples[j]); }, seed);
}

PairGap strong_gap_duality(const std::vector<GraphSample>& samples, double sigma, const NormModel& m,
                           std::uint64_t seed) {
  if (m.is_euclidean()) {
    return scan_pairs(
        samples,
        [&](std::size_t i, std::size_t j) {
          const auto& a = samples[i];
          const auto& b = samples[j];
          double s = 0.0;
          for (std::size_t k = 0; k < a.x.size(); ++k) {
            const double dx = a.x[k] - b.x[k];
            s += (a.xstar[k] - b.xstar[k]) * dx - sigma * dx * dx;
          }
          return s;
        },
        seed);
  }
  std::vector<Vec> jx(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) jx[i] = m.duality_map(samples[i].x);
  return scan_pairs(
      samples,
      [&](std::size_t i, std::size_t j) {
        const auto& a = samples[i];
        const auto& b = samples[j];
        double s = 0.0;
        for (std::size_t k = 0; k < a.x.size(); ++k) {
          const double dx = a.x[k] - b.x[k];
          s += (a.xstar[k] - b.xstar[k]) * dx - sigma * (jx[i][k] - jx[j][k]) * dx;
        }
        return s;
      },
      seed);
}

PairGap strong_gap_norm(const std::vector<GraphSample>& samples, double sigma, const NormModel& m,
                        std::uint64_t seed) {
  if (m.is_euclidean()) return strong_gap_duality(samples, sigma, m, seed);
  return scan_pairs(
      samples,
      [&](std::size_t i, std::size_t j) {
        return base_gap(samples[i], samples[j]) - sigma * m.squared_distance(samples[i].x, samples[j].x);
      },
      seed);
}

PairGap strong_gap_norm(const std::vector<GraphSample>& samples, double sigma, const NormFn& norm,
                        std::uint64_t seed) {
  return scan_pairs(
      samples,
      [&](std::size_t i, std::size_t j) {
        const double d = norm(sub(samples[i].x, samples[j].x));
        return base_gap(samples[i], samples[j]) - sigma * d * d;
      },
      seed);
}

const char* to_string(MonoKind k) { return k == MonoKind::kDuality ? "duality" : "norm"; }

MonoKind mono_kind_from_string(const std::string& s) {
  if (s == "duality") return MonoKind::kDuality;
  if (s == "norm") return MonoKind::kNorm;
  throw InputError("unknown monotonicity kind '" + s + "' (expected duality or norm)");
}

CertificateReport local_mono_certify(const FunctionModel& phi, const Window& w, double sigma, MonoKind kind,
                                     const SamplePlan& plan, const NormModel& m, const Tolerances& tol) {
  if (!(sigma >= 0.0)) throw InputError("local_mono_certify: σ must be nonnegative");
  const auto samples = graph_samples(phi, w, plan, m);
  CertificateReport rep;
  rep.check = "local_monotonicity";
  rep.tolerance = tol.cert_tol;
  nlohmann::json wj;
  to_json(wj, w);
  rep.params = {{"window", wj}, {"sigma", sigma}, {"kind", to_string(kind)}, {"samples", samples.size()}};
  if (samples.size() < 2) {
    rep.notes.push_back("fewer than two graph samples in the window");
    settle(rep);
    return rep;
  }
  const PairGap g = sigma == 0.0 ? monotone_gap(samples, plan.seed)
                    : kind == MonoKind::kDuality ? strong_gap_duality(samples, sigma, m, plan.seed)
                                                 : strong_gap_norm(samples, sigma, m, plan.seed);
  rep.tested = g.pairs;
  rep.margin = g.gap;
  for (const auto& [i, j] : g.worst) {
    const auto& a = samples[i];
    const auto& b = samples[j];
    const double lhs = base_gap(a, b);
    double rhs = 0.0;
    if (sigma != 0.0) {
      if (kind == MonoKind::kDuality) {
        rhs = sigma * dot(sub(m.duality_map(a.x), m.duality_map(b.x)), sub(a.x, b.x));
      } else {
        rhs = sigma * m.squared_distance(a.x, b.x);
      }
    }
    nlohmann::json ja, jb;
    to_json(ja, a);
    to_json(jb, b);
    rep.witnesses.push_back({{{"first", ja}, {"second", jb}}, lhs, rhs});
  }
  rep.result = {{"gap", g.gap}};
  settle(rep);
  return rep;
}

namespace {

/// Position of y relative to a 1-D set S: -1 if y < inf S, +1 if y > sup S,
/// 0 if y lies between its extremes.
int side(const SubdiffSet& s, double y) {
  if (y < s.min_pairing(Vec{1.0})) return -1;
  if (y > -s.min_pairing(Vec{-1.0})) return 1;
  return 0;
}

}  // namespace

CertificateReport resolvent_probe(const FunctionModel& phi, double lambda, const Window& w, const NormModel& m,
                                  const SamplePlan& plan, const Tolerances& tol) {
  if (phi.dim() != 1) throw CapabilityError("resolvent_probe: only one-dimensional models are supported");
  if (!(lambda > 0.0)) throw InputError("resolvent_probe: λ must be positive");
  if (!phi.has_subdiff()) throw CapabilityError("resolvent_probe: model has no subdifferential oracle");
  w.validate(1);
  const double xbar = w.center_x[0];
  const double ybar = w.center_xstar[0] + lambda * m.duality_map(w.center_x)[0];
  const std::vector<double> ygrid = linspace(ybar - w.r2 / 2.0, ybar + w.r2 / 2.0, 21);

  std::vector<Vec> pts = window_points(phi, w, plan, m);
  const double fbar = phi.value(w.center_x);
  std::vector<double> xs;
  std::vector<SubdiffSet> sets;
  for (const auto& p : pts) {
    const double fx = phi.value(p);
    if (!(fx < fbar + w.eps)) continue;
    xs.push_back(p[0]);
    sets.push_back(phi.subdiff(p).translated(Vec{lambda * m.duality_map(p)[0]}));
  }
  const auto shifted = [&](double x) {
    const Vec v{x};
    return phi.subdiff(v).translated(Vec{lambda * m.duality_map(v)[0]});
  };

  struct Row {
    double y;
    std::vector<double> roots;
  };
  auto rows = parallel_map<Row>(ygrid.size(), [&](std::size_t t) {
    Row row{ygrid[t], {}};
    const double y = ygrid[t];
    const Vec yv{y};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (sets[i].contains(yv, tol.value_tol)) row.roots.push_back(xs[i]);
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (sets[i].is_empty() || sets[i + 1].is_empty()) continue;
      const int sa = side(sets[i], y), sb = side(sets[i + 1], y);
      if (sa == 0 || sb == 0 || sa == sb) continue;
      double a = xs[i], b = xs[i + 1];
      for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
        const double c = 0.5 * (a + b);
        const SubdiffSet sc = shifted(c);
        if (sc.contains(yv, tol.value_tol)) {
          a = b = c;
          break;
        }
        const int s = sc.is_empty() ? sa : side(sc, y);
        if (s == sa) {
          a = c;
        } else {
          b = c;
        }
      }
      row.roots.push_back(0.5 * (a + b));
    }
    std::sort(row.roots.begin(), row.roots.end());
    row.roots.erase(std::unique(row.roots.begin(), row.roots.end(),
                                [&](double p, double q) { return std::abs(p - q) <= tol.cluster_tol; }),
                    row.roots.end());
    return row;
  });

  CertificateReport rep;
  rep.check = "resolvent";
  rep.tolerance = tol.cert_tol;
  nlohmann::json wj;
  to_json(wj, w);
  rep.params = {{"window", wj}, {"lambda", lambda}, {"grid", ygrid.size()}};

  std::vector<double> sol(ygrid.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> gaps;
  nlohmann::json table = nlohmann::json::array();
  bool single = true;
  double max_diameter = 0.0;
  rep.margin = kInf;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    if (r.roots.empty()) {
      gaps.push_back(r.y);
      continue;
    }
    const double diam = r.roots.back() - r.roots.front();
    max_diameter = std::max(max_diameter, diam);
    // nearest root to x̄ represents the localization
    double best = r.roots.front();
    for (double x : r.roots)
      if (std::abs(x - xbar) < std::abs(best - xbar)) best = x;
    sol[t] = best;
    if (diam > tol.cluster_tol) {
      single = false;
      rep.witnesses.push_back({{{"ystar", r.y}, {"solutions", r.roots}}, tol.cluster_tol, diam});
      rep.margin = std::min(rep.margin, tol.cluster_tol - diam);
    }
  }
  double modulus = 0.0;
  double worst_mono = kInf;
  Witness mono_witness;
  for (std::size_t t = 0; t + 1 < sol.size(); ++t) {
    if (std::isnan(sol[t]) || std::isnan(sol[t + 1])) continue;
    const double dy = ygrid[t + 1] - ygrid[t];
    const double dx = sol[t + 1] - sol[t];
    const double ratio = std::abs(dx) / std::abs(dy);
    modulus = std::max(modulus, ratio);
    table.push_back({{"y1", ygrid[t]}, {"y2", ygrid[t + 1]}, {"x1", sol[t]}, {"x2", sol[t + 1]}, {"ratio", ratio}});
    // ∂φ evaluated along the solutions: x_i* = y_i* − λJ(x_i)
    const double dj = m.duality_map(Vec{sol[t + 1]})[0] - m.duality_map(Vec{sol[t]})[0];
    const double lhs = dy * dx;
    const double rhs = lambda * dj * dx;
    ++rep.tested;
    if (lhs - rhs < worst_mono) {
      worst_mono = lhs - rhs;
      mono_witness = {{{"y1", ygrid[t]}, {"y2", ygrid[t + 1]}, {"x1", sol[t]}, {"x2", sol[t + 1]}}, lhs, rhs};
    }
  }
  rep.tested += rows.size() - gaps.size();
  if (std::isfinite(worst_mono)) {
    rep.margin = std::min(rep.margin, worst_mono);
    if (worst_mono < -tol.cert_tol) rep.witnesses.insert(rep.witnesses.begin(), mono_witness);
  }
  rep.result = {{"single_valued", single},
                {"max_cluster_diameter", max_diameter},
                {"modulus", modulus},
                {"modulus_table", table},
                {"solutions", nlohmann::json::array()}};
  for (std::size_t t = 0; t < sol.size(); ++t) {
    rep.result["solutions"].push_back({{"ystar", ygrid[t]}, {"x", std::isnan(sol[t]) ? nlohmann::json(nullptr)
                                                                                        : nlohmann::json(sol[t])}});
  }
  if (!gaps.empty()) {
    rep.result["coverage_gaps"] = gaps;
    rep.notes.push_back(std::to_string(gaps.size()) + " grid values of y* have no bracketed solution in U");
  }
  if (rows.size() == gaps.size()) {
    rep.margin = kInf;
    rep.tested = 0;
  }
  if (rep.witnesses.size() > kMaxWitnesses) rep.witnesses.resize(kMaxWitnesses);
  settle(rep);
  return rep;
}

}  // namespace varcert
