// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <varcert/varcert.hpp>
#include <varcert_cli/cli.hpp>

#include "l1_oracle.hpp"
#include "oracles.hpp"

using namespace varcert;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const NormModel kE1 = NormModel::euclidean(1);
const Vec kZero{0.0};

struct Outcome {
  bool pass = true;
  std::string detail;
  /// Everything the criterion computed, for the determinism comparison.
  nlohmann::json payload = nlohmann::json::array();

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void record(const std::string& label, const nlohmann::json& j) { payload.push_back({{"label", label}, {"data", j}}); }
  void record(const std::string& label, const CertificateReport& r) {
    nlohmann::json j;
    to_json(j, r);
    record(label, j);
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string note(Outcome& o, const std::string& s) {
  if (o.pass) o.detail = o.detail.empty() ? s : o.detail + "; " + s;
  return s;
}

// ---- 1 --------------------------------------------------------------------

Outcome duality_identities() {
  Outcome o;
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (std::size_t n : {1u, 2u, 5u}) {
      const NormModel m(p, n);
      Rng rng(static_cast<std::uint64_t>(p * 100) + n);
      double cell = 0.0;
      for (int i = 0; i < 10000; ++i) {
        Vec x(n);
        const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
        for (auto& c : x) c = scale * rng.uniform(-1.0, 1.0);
        const Vec j = m.duality_map(x);
        const double nx = m.norm(x);
        const double bound = 1e-10 * (1.0 + nx * nx);
        const double e1 = std::abs(dot(j, x) - nx * nx) / bound;
        const double e2 = std::abs(m.dual_norm(j) - nx) / bound;
        cell = std::max({cell, e1, e2});
      }
      o.record("p=" + std::to_string(p) + " n=" + std::to_string(n), cell);
      worst = std::max(worst, cell);
    }
  o.require(worst <= 1.0, "identity error exceeds bound");
  note(o, "worst error/bound " + fmt("%.3g", worst));
  return o;
}

// ---- 2 --------------------------------------------------------------------

Outcome hilbert_tilt_identity() {
  Outcome o;
  const std::vector<std::string> names = {"abs", "quadratic", "huber_source", "staircase", "zero_one"};
  Rng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::string& name = names[i % names.size()];
    const FunctionModel phi = gallery_lookup(name);
    const double lambda = std::pow(10.0, rng.uniform(-1.0, 0.3));
    const double x = rng.uniform(-0.8, 0.8);
    const double xs = rng.uniform(-0.5, 0.5);
    const SamplePlan plan(static_cast<std::uint64_t>(i), 401, 0, Box::cube(1, -5.0, 5.0));
    const auto lhs = tilted_envelope(phi, lambda, Vec{xs}, Vec{x}, plan, kE1);
    const auto rhs = moreau_envelope(phi, lambda, Vec{x + lambda * xs}, plan, kE1);
    const double gap = std::abs(lhs.value - (rhs.value - xs * x - 0.5 * lambda * xs * xs));
    const auto tp = tilted_prox(phi, lambda, Vec{xs}, Vec{x}, plan, kE1);
    const auto pp = proximal_map(phi, lambda, Vec{x + lambda * xs}, plan, kE1);
    double prox_gap = tp.minimizers.size() == pp.minimizers.size() ? 0.0 : kInf;
    for (std::size_t k = 0; std::isfinite(prox_gap) && k < tp.minimizers.size(); ++k)
      prox_gap = std::max(prox_gap, std::abs(tp.minimizers[k][0] - pp.minimizers[k][0]));
    worst = std::max({worst, gap, prox_gap});
    o.record(name, {{"lambda", lambda}, {"x", x}, {"xstar", xs}, {"envelope_gap", gap}, {"prox_gap", prox_gap}});
  }
  o.require(worst <= 1e-6, "tilt identity gap " + fmt("%.3g", worst));
  note(o, "100 cases, worst gap " + fmt("%.3g", worst));
  return o;
}

// ---- 3 --------------------------------------------------------------------

Outcome shift_identity() {
  Outcome o;
  FunctionModel square("square", 1, [](VecView x) { return x[0] * x[0]; });
  const SamplePlan plan(1, 201, 0, Box::cube(1, -4.0, 4.0));
  const auto sq = check_shift_identity(square, 1.0, 0.5, Vec{1.0}, plan, kE1);
  o.record("square", sq);
  o.require(sq.certified() && std::abs(sq.margin) <= 1e-10, "x^2 identity residual " + fmt("%.3g", sq.margin));
  double worst = 0.0;
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(-2.0, 2.0);
    const auto r = check_shift_identity(models::abs_value(1), 0.5, 1.0, Vec{x}, plan, kE1);
    o.record("abs", r);
    o.require(r.certified(), "|x| identity fails at x=" + fmt("%.6g", x));
    worst = std::max(worst, std::abs(r.margin));
  }
  o.require(worst <= 1e-6, "|x| residual " + fmt("%.3g", worst));
  note(o, "x^2 residual " + fmt("%.2g", std::abs(sq.margin)) + ", |x| worst " + fmt("%.2g", worst));
  return o;
}

// ---- 4 --------------------------------------------------------------------

Outcome gradient_formula() {
  Outcome o;
  const std::vector<std::pair<std::string, nlohmann::json>> models = {
      {"staircase", {}}, {"zero_one", {}}, {"abs", {}}, {"quadratic", {}}, {"huber_source", {}},
      {"l1_weighted_square", {{"m", 2}}}};
  const double lambda = 0.5;
  const double h = 1e-4;
  double worst = 0.0;
  std::size_t replaced = 0;
  for (const auto& [name, params] : models) {
    const FunctionModel phi = gallery_lookup(name, params);
    const std::size_t n = phi.dim();
    const NormModel m = NormModel::euclidean(n);
    const SamplePlan plan(4, n == 1 ? 401 : 201, 0, Box::cube(n, -3.0, 3.0));
    const Vec xs(n, 0.1);
    Rng rng(40 + n);
    int used = 0;
    for (int attempt = 0; used < 20 && attempt < 200; ++attempt) {
      Vec x(n);
      for (auto& c : x) c = rng.uniform(-0.9, 0.9);
      Vec g;
      try {
        g = envelope_gradient(phi, lambda, xs, x, m, plan);
      } catch (const NonSmoothError&) {
        ++replaced;
        continue;
      }
      double err = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        Vec hi = x, lo = x;
        hi[k] += h;
        lo[k] -= h;
        const double fd =
            (tilted_envelope(phi, lambda, xs, hi, plan, m).value - tilted_envelope(phi, lambda, xs, lo, plan, m).value) /
            (2 * h);
        err = std::max(err, std::abs(fd - g[k]));
      }
      const double rel = err / std::max(NormModel::euclidean(n).norm(g), 1e-8);
      worst = std::max(worst, rel);
      o.record(name, {{"x", x}, {"gradient", g}, {"relative_error", rel}});
      ++used;
    }
    o.require(used == 20, name + ": only " + std::to_string(used) + " smooth points");
  }
  o.require(worst <= 1e-3, "relative error " + fmt("%.3g", worst));
  note(o, "worst relative error " + fmt("%.2g", worst) + ", " + std::to_string(replaced) +
              " non-smooth points replaced");
  return o;
}

// ---- 5 --------------------------------------------------------------------

Outcome modulus_interplay() {
  Outcome o;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto r = certify_envelope_convexity(oracle::plain_quadratic(alpha), kZero, kZero, {0.1, 0.5, 1.0}, alpha,
                                              kE1, SamplePlan(1, 201, 0, Box::cube(1, -2.0, 2.0)));
    o.record("alpha", r);
    for (const auto& row : r.result.at("per_lambda")) {
      const double lambda = row.at("lambda");
      const double err = std::abs(row.at("modulus").get<double>() - alpha / (1 + alpha * lambda));
      worst = std::max(worst, err);
    }
  }
  o.require(worst <= 1e-4, "modulus error " + fmt("%.3g", worst));
  note(o, "worst |modulus - a/(1+a*lambda)| " + fmt("%.2g", worst));
  return o;
}

// ---- 6 --------------------------------------------------------------------

const std::vector<double> kDeltas = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};

Outcome zero_one_example() {
  Outcome o;
  const FunctionModel zo = models::zero_one();
  const SamplePlan plan(1, 101, 0, Box::cube(1, -1.0, 1.0));
  const Window w(kZero, kZero, 0.5, 0.5, 0.5);
  const auto svc = certify_variational_convexity(zo, kZero, kZero, 1.0, w, kE1, plan);
  const auto sc = subdiff_continuity_check(zo, kZero, kZero, kDeltas, plan, kE1);
  const auto pr = prox_regularity_certify(zo, kZero, kZero, w, plan, kE1);
  const auto psd = psd_certify(zo, w, 1.0, plan, kE1);
  for (const auto& [l, r] : {std::pair{"svc", &svc}, {"subdiffcont", &sc}, {"proxreg", &pr}, {"psd", &psd}})
    o.record(l, *r);
  o.require(svc.certified(), "svc not certified");
  o.require(sc.refuted(), "subdiff continuity not refuted");
  o.require(pr.certified(), "prox-regularity not certified");
  bool witness = false;
  if (psd.refuted())
    for (const auto& wit : psd.witnesses) {
      const auto& in = wit.inputs;
      witness = witness || (in.at("z").is_array() && in.at("z").at(0) == 0.0 && in.at("w").at(0) == 1.0);
    }
  o.require(psd.refuted() && witness, "psd not refuted with z=0, w=1");
  note(o, "svc C, subdiffcont R, proxreg C, psd R (z=0, w=1)");
  return o;
}

// ---- 7 --------------------------------------------------------------------

std::set<double> subgradients(const SubdiffSet& s) {
  std::set<double> out;
  for (const auto& p : s.point_list()) out.insert(p[0]);
  return out;
}

Outcome staircase_example() {
  Outcome o;
  const FunctionModel st = models::staircase();
  bool table = true;
  for (int k = 2; k <= 8; ++k) {
    const double kd = k, slope = (kd + 1) / kd, a = 1 / (kd + 1), c = (kd + 2) / ((kd + 1) * (kd + 1)), b = 1 / kd;
    const auto iv = [&](double x, double lo, double hi) {
      const SubdiffSet s = st.subdiff(Vec{x});
      const auto l = s.interval_list();
      return s.kind() == SubdiffSet::Kind::kIntervals && l.size() == 1 && l[0].lo == lo && l[0].hi == hi;
    };
    const auto pts = [&](double x, std::set<double> want) {
      const SubdiffSet s = st.subdiff(Vec{x});
      return s.kind() == SubdiffSet::Kind::kPoints && subgradients(s) == want;
    };
    table = table && iv(a, 0.0, slope) && iv(-a, -slope, 0.0) && pts(0.5 * (a + c), {slope}) &&
            pts(-0.5 * (a + c), {-slope}) && pts(c, {0.0, slope}) && pts(-c, {-slope, 0.0}) &&
            pts(0.5 * (c + b), {0.0}) && pts(-0.5 * (c + b), {0.0});
  }
  o.require(table, "subdifferential table mismatch");

  const Box u = Box::around(kZero, 0.5);
  for (double v : {0.2, 0.05}) {
    const auto t = tilt_stability_certify(st, kZero, u, v, SamplePlan(1, 201, 0, u), kE1);
    o.record("tilt", t);
    o.require(t.certified(), "tilt not certified at v=" + fmt("%.2g", v));
  }
  const SamplePlan plan(1, 101, 0, Box::cube(1, -1.0, 1.0));
  const auto pr = prox_regularity_certify(st, kZero, kZero, Window(kZero, kZero, 0.3, 0.3, 0.1), plan, kE1);
  o.record("proxreg", pr);
  o.require(pr.refuted(), "prox-regularity not refuted");
  for (int k = 4; k <= 10; ++k) {
    const double ck = 0.5 * (models::staircase_kink_concave(k) + 1.0 / k);
    const SubdiffSet s = combined_second_subdiff(st, Vec{ck}, kZero, Vec{1.0});
    o.require(s.kind() == SubdiffSet::Kind::kPoints && subgradients(s) == std::set<double>{0.0},
              "combined set at c_" + std::to_string(k) + " is not {0}");
  }
  o.require(limiting_second_subdiff(st, kZero, kZero, Vec{1.0}).contains(kZero), "0 not in limiting set at origin");
  const auto pb = pointbased_check(st, kZero, plan);
  o.record("pointbased", pb);
  o.require(pb.refuted(), "pointbased not refuted");
  note(o, "table k=2..8 exact, tilt C at 0.2/0.05, proxreg R (margin " + fmt("%.3g", pr.margin) +
              "), combined {0}, limiting contains 0, pointbased R");
  return o;
}

// ---- 8 --------------------------------------------------------------------

Outcome l1_example() {
  Outcome o;
  const std::size_t m = 512;
  const Box box = Box::cube(m, -1.0, 1.0);
  const auto pol =
      polyak_strong_convexity_check(models::l1_weighted_square(m), 2.0, box, SamplePlan(8, 1, 10000, box), l1_grid_norm(m));
  o.record("polyak", pol);
  o.require(pol.certified() && pol.tested == 10000, "polyak not certified on 1e4 triples");

  const double gap = oracle::l1_witness_gap();
  double rel_512 = 0.0, rel_2048 = 0.0;
  for (std::size_t grid : {512u, 2048u}) {
    const auto [u, v] = oracle::l1_witness_pair(grid);
    const Box b = Box::cube(grid, -1.0, 1.0);
    const auto sh = shift_strong_convexity_check(models::l1_weighted_square(grid), 2.0, b, SamplePlan(8, 1, 100, b),
                                                 l1_grid_norm(grid), {{u, v}});
    o.record("shift m=" + std::to_string(grid), sh);
    const double measured = -sh.result.at("extra_slacks").at(0).get<double>();
    const double rel = std::abs(measured - gap) / gap;
    (grid == 512 ? rel_512 : rel_2048) = rel;
    o.require(sh.refuted(), "shift not refuted at m=" + std::to_string(grid));
  }
  o.require(rel_2048 <= 1e-3, "gap mismatch at m=2048: rel " + fmt("%.3g", rel_2048));
  note(o, "polyak C (1e4 triples), quadrature gap " + fmt("%.10f", gap) + ", rel err m=512 " + fmt("%.2g", rel_512) +
              ", m=2048 " + fmt("%.2g", rel_2048));
  return o;
}

// ---- 9 --------------------------------------------------------------------

struct SeededWindow {
  Vec xbar;
  Vec xbar_star;
  Window w;
};

SeededWindow seeded_window(const FunctionModel& phi, std::uint64_t seed) {
  Rng rng(seed);
  const double x = seed % 4 == 0 ? 0.0 : rng.uniform(-0.6, 0.6);
  const Vec xv{x};
  const auto subs = phi.subdiff(xv).enumerate(xv, 2.0);
  Vec xs = subs.empty() ? Vec{0.0} : subs[static_cast<std::size_t>(rng.uniform(0.0, 0.999) * subs.size())];
  const double r1 = rng.uniform(0.1, 0.5);
  const double r2 = rng.uniform(0.3, 1.0);
  const double eps = seed % 3 == 0 ? kInf : rng.uniform(0.2, 1.0);
  return {xv, xs, Window(xv, xs, r1, r2, eps)};
}

// A property holds on the samples unless a violation was found; an empty
// test set satisfies it vacuously.
bool holds(const CertificateReport& r) { return !r.refuted(); }

Outcome theorem_consistency() {
  Outcome o;
  std::size_t windows = 0, implications = 0, counterexamples = 0, skipped = 0, vacuous_psd = 0;
  std::vector<std::string> found;
  const auto violation = [&](const std::string& what) {
    ++counterexamples;
    if (found.size() < 3) found.push_back(what);
  };
  for (const std::string name : {"staircase", "zero_one", "abs", "quadratic", "huber_source"}) {
    const FunctionModel phi = gallery_lookup(name);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const SeededWindow sw = seeded_window(phi, seed);
      const std::string tag = name + "#" + std::to_string(seed);
      if (sw.xbar_star.empty() || !phi.subdiff(sw.xbar).contains(sw.xbar_star)) {
        ++skipped;
        continue;
      }
      ++windows;
      const SamplePlan plan(seed, 81, 0, Box::around(sw.xbar, sw.w.r1));
      for (double sigma : {0.0, 0.5, 1.0}) {
        const auto svc = certify_variational_convexity(phi, sw.xbar, sw.xbar_star, sigma, sw.w, kE1, plan);
        const auto smono = local_mono_certify(phi, sw.w, sigma, MonoKind::kDuality, plan, kE1);
        const auto mono = local_mono_certify(phi, sw.w, 0.0, MonoKind::kDuality, plan, kE1);
        const auto growth = second_order_growth_check(phi, sw.w, sigma, plan, kE1);
        o.record(tag + " svc", svc);
        o.record(tag + " smono", smono);
        o.record(tag + " growth", growth);
        implications += 3;
        if (holds(svc) && !holds(smono)) violation(tag + ": svc without strong mono");
        if (holds(smono) && !holds(mono)) violation(tag + ": strong mono without mono");
        if (growth.verdict != svc.verdict) violation(tag + ": growth and svc disagree");
        if (sigma > 0.0) {
          const auto tr = quadratic_shift_transfer(phi, sigma, sw.xbar, sw.xbar_star, sw.w, kE1, plan);
          nlohmann::json j;
          to_json(j, tr);
          o.record(tag + " transfer", j);
          ++implications;
          if (!tr.agree) violation(tag + ": shift transfer disagrees");
        }
      }
      // vc at x̄ ⇔ psd on a neighborhood, on windows where the regularity hypotheses hold
      const auto pr = prox_regularity_certify(phi, sw.xbar, sw.xbar_star, sw.w, plan, kE1);
      const auto sc = subdiff_continuity_check(phi, sw.xbar, sw.xbar_star, kDeltas, plan, kE1);
      o.record(tag + " proxreg", pr);
      o.record(tag + " subdiffcont", sc);
      if (pr.certified() && sc.certified()) {
        bool vc = false, psd = false;
        for (double f : {1.0, 0.5, 0.25}) {
          const Window wf = sw.w.shrunk(f);
          vc = vc || holds(certify_variational_convexity(phi, sw.xbar, sw.xbar_star, 0.0, wf, kE1, plan));
          const auto pc = psd_certify(phi, wf, 0.0, plan, kE1);
          vacuous_psd += pc.vacuous();
          psd = psd || holds(pc);
        }
        o.record(tag + " vc_psd", {{"vc", vc}, {"psd", psd}});
        ++implications;
        if (vc != psd) violation(tag + ": vc and psd disagree");
      }
    }
  }
  o.require(counterexamples == 0, std::to_string(counterexamples) + " counterexamples");
  for (const auto& f : found) o.require(false, f);
  o.record("counts",
           {{"windows", windows}, {"implications", implications}, {"skipped", skipped}, {"vacuous_psd", vacuous_psd}});
  note(o, std::to_string(windows) + " windows, " + std::to_string(implications) + " implications, " +
              std::to_string(counterexamples) + " counterexamples, " + std::to_string(vacuous_psd) +
              " vacuous psd runs");
  return o;
}

// ---- 10 -------------------------------------------------------------------

nlohmann::json cli_payloads(std::size_t threads) {
  const std::vector<std::vector<std::string>> runs = {
      {"certify", "svc", "--model", "gallery:zero_one", "--sigma", "1", "--eps", "0.5"},
      {"certify", "mono", "--model", "gallery:huber_source", "--sigma", "0.5", "--r1", "0.8", "--grid", "301"},
      {"certify", "proxreg", "--model", "gallery:staircase", "--r2", "2"},
      {"certify", "tilt", "--model", "gallery:staircase"},
      {"envelope", "--model", "gallery:abs", "--lambda", "1", "--x", "2"},
  };
  nlohmann::json out = nlohmann::json::array();
  for (auto args : runs) {
    args.insert(args.end(), {"--threads", std::to_string(threads)});
    std::ostringstream rep, err;
    const int code = cli::run(args, rep, err);
    nlohmann::json j = cli::strip_timing(nlohmann::json::parse(rep.str()));
    j["config"].erase("threads");
    out.push_back({{"exit", code}, {"report", j}});
  }
  return out;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
  double budget_seconds;
};

const std::vector<Criterion> kCriteria = {
    {1, "duality-map identities", duality_identities, 5},
    {2, "Hilbert tilt identity", hilbert_tilt_identity, 30},
    {3, "shift identity", shift_identity, 10},
    {4, "envelope gradient formula", gradient_formula, 30},
    {5, "envelope modulus interplay", modulus_interplay, 10},
    {6, "zero-one example", zero_one_example, 10},
    {7, "staircase example", staircase_example, 30},
    {8, "L1 strong convexity example", l1_example, 30},
    {9, "theorem consistency", theorem_consistency, 120},
};

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const std::size_t many = std::max<std::size_t>(4, std::thread::hardware_concurrency());
  bool all = true;

  set_max_threads(1);
  std::vector<nlohmann::json> first;
  for (const auto& c : kCriteria) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (secs > c.budget_seconds) o.require(false, "over time budget " + fmt("%.0f s", c.budget_seconds));
    all = all && o.pass;
    std::printf("criterion %2d %s: %s (%.2f s) %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    first.push_back(o.payload);
  }
  first.push_back(cli_payloads(1));

  const auto t0 = clock::now();
  std::vector<std::string> mismatches;
  for (std::size_t threads : {std::size_t{1}, many}) {
    set_max_threads(threads);
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
      Outcome o;
      try {
        o = kCriteria[i].run();
      } catch (const std::exception&) {
      }
      if (o.payload.dump() != first[i].dump())
        mismatches.push_back(std::to_string(kCriteria[i].id) + "@" + std::to_string(threads));
    }
    if (cli_payloads(threads).dump() != first.back().dump()) mismatches.push_back("cli@" + std::to_string(threads));
  }
  set_max_threads(0);
  const double secs = std::chrono::duration<double>(clock::now() - t0).count();
  const bool same = mismatches.empty();
  std::string detail = same ? "payloads identical at 1 and " + std::to_string(many) + " threads" : "mismatch:";
  for (const auto& m : mismatches) detail += " " + m;
  all = all && same;
  std::printf("criterion 10 determinism: %s (%.2f s) %s\n", same ? "PASS" : "FAIL", secs, detail.c_str());
  return all ? 0 : 1;
}
