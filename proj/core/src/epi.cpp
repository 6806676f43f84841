#include "varcert/epi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/gallery.hpp"
#include "varcert/parallel.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_terms(const FunctionSequence& seq, const FunctionModel& phi) {
  if (seq.terms < 3) throw InputError("epi: a sequence needs at least three terms");
  if (seq.dim != phi.dim()) throw InputError("epi: sequence and limit dimensions differ");
  if (!seq.term) throw InputError("epi: sequence has no term oracle");
}

double extrapolate(double near, double far) {
  if (!std::isfinite(near) || !std::isfinite(far)) return near;
  return 2.0 * near - far;
}

Vec diagonal_shift(VecView x, double s) {
  Vec y(x.begin(), x.end());
  for (auto& v : y) v += s;
  return y;
}

FunctionModel one_d(std::string name, std::function<double(double)> f) {
  return FunctionModel(std::move(name), 1, [f = std::move(f)](VecView x) { return f(x[0]); });
}

}  // namespace

PathGenerator default_paths(bool with_recovery) {
  return [with_recovery](VecView xv) {
    const Vec x(xv.begin(), xv.end());
    std::vector<Path> out;
    out.push_back({"constant", [x](std::size_t) { return x; }});
    out.push_back({"plus_linear", [x](std::size_t k) { return diagonal_shift(x, 0.1 / static_cast<double>(k)); }});
    out.push_back({"minus_linear", [x](std::size_t k) { return diagonal_shift(x, -0.1 / static_cast<double>(k)); }});
    if (with_recovery) {
      out.push_back({"recovery", [x](std::size_t k) { return diagonal_shift(x, 1.0 / static_cast<double>(k)); }});
    }
    return out;
  };
}

TailEstimate tail_estimate(std::size_t terms, const std::function<double(std::size_t)>& value) {
  if (terms < 3) throw InputError("tail_estimate: at least three terms are required");
  const std::size_t half = std::max<std::size_t>(terms / 2, 2);
  const std::size_t quarter = std::max<std::size_t>(terms / 4, 1);
  double far_min = kInf, far_max = -kInf, near_min = kInf, near_max = -kInf;
  for (std::size_t k = quarter; k <= terms; ++k) {
    const double v = value(k);
    if (k < half) {
      far_min = std::min(far_min, v);
      far_max = std::max(far_max, v);
    } else {
      near_min = std::min(near_min, v);
      near_max = std::max(near_max, v);
    }
  }
  return {extrapolate(near_min, far_min), extrapolate(near_max, far_max)};
}

CertificateReport epi_convergence_check(const FunctionSequence& seq, const FunctionModel& phi,
                                        const SamplePlan& grid, const PathGenerator& paths,
                                        const Tolerances& tol) {
  require_terms(seq, phi);
  const auto pts = grid.points();

  struct PointResult {
    double liminf_slack = kInf;
    std::string liminf_path;
    double liminf_value = 0.0;
    double limsup_slack = -kInf;
    double limsup_value = 0.0;
    double fx = 0.0;
  };
  const auto results = parallel_map<PointResult>(pts.size(), [&](std::size_t i) {
    PointResult r;
    r.fx = phi.value(pts[i]);
    const auto ps = paths(pts[i]);
    if (ps.size() < 3) throw InputError("epi: the path generator must supply at least three sequences");
    double best_sup = kInf;
    for (const auto& p : ps) {
      const TailEstimate t = tail_estimate(seq.terms, [&](std::size_t k) { return seq.eval(k, p.at(k)); });
      const double s_inf = std::isinf(r.fx) && r.fx > 0 ? (t.liminf == kInf ? kInf : -kInf) : t.liminf - r.fx;
      if (s_inf < r.liminf_slack) {
        r.liminf_slack = s_inf;
        r.liminf_path = p.name;
        r.liminf_value = t.liminf;
      }
      best_sup = std::min(best_sup, t.limsup);
    }
    r.limsup_value = best_sup;
    r.limsup_slack = r.fx == kInf ? kInf : r.fx - best_sup;
    return r;
  });

  CertificateReport rep;
  rep.check = "epi_convergence";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"sequence", seq.name}, {"terms", seq.terms}, {"points", pts.size()}};
  rep.margin = kInf;
  WorstK worst;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rep.tested += 2;
    worst.offer(results[i].liminf_slack, 2 * i);
    worst.offer(results[i].limsup_slack, 2 * i + 1);
  }
  if (!worst.empty()) rep.margin = worst.min_slack();
  for (const auto& e : worst.entries()) {
    const auto& r = results[e.key / 2];
    const Vec& x = pts[e.key / 2];
    if (e.key % 2 == 0) {
      rep.witnesses.push_back({{{"condition", "liminf"}, {"x", x}, {"path", r.liminf_path}},
                               r.liminf_value, r.fx});
    } else {
      rep.witnesses.push_back({{{"condition", "limsup"}, {"x", x}}, r.fx, r.limsup_value});
    }
  }
  settle(rep);
  return rep;
}

CertificateReport argmin_limsup_check(const FunctionSequence& seq, const FunctionModel& phi,
                                      const SamplePlan& grid, const Tolerances& tol) {
  require_terms(seq, phi);
  const auto pts = grid.points();
  if (pts.empty()) throw InputError("argmin_limsup_check: empty grid");
  double step = 0.0;
  if (grid.grid_per_axis > 1) {
    for (std::size_t k = 0; k < phi.dim(); ++k) {
      step = std::max(step, (grid.box.hi[k] - grid.box.lo[k]) / static_cast<double>(grid.grid_per_axis - 1));
    }
  }

  const auto grid_argmin = [&](const std::function<double(VecView)>& f, double& value) {
    std::vector<double> vals(pts.size());
    parallel_chunks(pts.size(), [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) vals[i] = f(pts[i]);
    });
    value = *std::min_element(vals.begin(), vals.end());
    std::vector<std::size_t> arg;
    if (!std::isfinite(value)) return arg;
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] <= value + tol.value_tol) arg.push_back(i);
    return arg;
  };

  double inf_phi = 0.0;
  const auto arg_phi = grid_argmin([&](VecView x) { return phi.value(x); }, inf_phi);
  if (arg_phi.empty()) throw PreconditionError("argmin_limsup_check: φ has no finite minimum on the grid");

  // at most ~200 tail terms, evenly spread over [terms/4, terms]
  const std::size_t quarter = std::max<std::size_t>(seq.terms / 4, 1);
  const std::size_t half = std::max<std::size_t>(seq.terms / 2, 2);
  const std::size_t stride = std::max<std::size_t>((seq.terms - quarter) / 200, 1);
  std::vector<std::size_t> ks;
  for (std::size_t k = quarter; k <= seq.terms; k += stride) ks.push_back(k);
  if (ks.back() != seq.terms) ks.push_back(seq.terms);

  double far_sup = -kInf, near_sup = -kInf;
  double worst_dist = 0.0;
  std::size_t worst_k = 0;
  Vec worst_x;
  for (std::size_t k : ks) {
    double v = 0.0;
    const auto arg = grid_argmin([&](VecView x) { return seq.eval(k, x); }, v);
    if (arg.empty()) throw PreconditionError("argmin_limsup_check: φ^k has no finite minimum on the grid");
    (k < half ? far_sup : near_sup) = std::max(k < half ? far_sup : near_sup, v);
    if (k < half) continue;
    for (std::size_t i : arg) {
      double d = kInf;
      for (std::size_t j : arg_phi) d = std::min(d, max_abs_distance(pts[i], pts[j]));
      if (d > worst_dist) {
        worst_dist = d;
        worst_k = k;
        worst_x = pts[i];
      }
    }
  }
  const double limsup_inf = extrapolate(near_sup, far_sup);

  CertificateReport rep;
  rep.check = "argmin_limsup";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"sequence", seq.name}, {"terms", seq.terms}, {"tail_terms", ks.size()}, {"grid_step", step}};
  rep.tested = ks.size() + 1;
  const double s_value = inf_phi - limsup_inf;
  const double dist_tol = step + tol.cert_tol;
  const double s_arg = dist_tol - worst_dist;
  rep.margin = std::min(s_value, s_arg);
  if (s_value < s_arg) {
    rep.witnesses.push_back({{{"condition", "inf"}}, inf_phi, limsup_inf});
    rep.witnesses.push_back({{{"condition", "argmin"}, {"k", worst_k}, {"x", worst_x}}, dist_tol, worst_dist});
  } else {
    rep.witnesses.push_back({{{"condition", "argmin"}, {"k", worst_k}, {"x", worst_x}}, dist_tol, worst_dist});
    rep.witnesses.push_back({{{"condition", "inf"}}, inf_phi, limsup_inf});
  }
  rep.result = {{"inf_limit", inf_phi}, {"limsup_inf", limsup_inf}, {"max_argmin_distance", worst_dist}};
  settle(rep);
  return rep;
}

const std::vector<std::string>& epi_problem_names() {
  static const std::vector<std::string> names = {"constant_abs", "offset_quadratic", "moving_spike",
                                                 "shifted_quadratic", "sinking_quadratic"};
  return names;
}

EpiProblem epi_problem_lookup(const std::string& name) {
  const auto seq = [](std::string n, std::function<double(std::size_t, double)> f) {
    FunctionSequence s;
    s.name = std::move(n);
    s.term = [f = std::move(f)](std::size_t k, VecView x) { return f(k, x[0]); };
    return s;
  };
  const auto inv = [](std::size_t k) { return 1.0 / static_cast<double>(k); };
  if (name == "constant_abs") {
    return {seq(name, [](std::size_t, double x) { return std::abs(x); }), models::abs_value(1), false};
  }
  if (name == "offset_quadratic") {
    return {seq(name, [inv](std::size_t k, double x) { return x * x + inv(k); }),
            one_d("square", [](double x) { return x * x; }), false};
  }
  if (name == "moving_spike") {
    return {seq(name, [inv](std::size_t k, double x) { return x == inv(k) ? 0.0 : 1.0; }),
            one_d("zero_one", [](double x) { return x == 0.0 ? 0.0 : 1.0; }), true};
  }
  if (name == "shifted_quadratic") {
    return {seq(name,
                [inv](std::size_t k, double x) {
                  const double d = x - inv(k);
                  return d * d;
                }),
            one_d("square", [](double x) { return x * x; }), false};
  }
  if (name == "sinking_quadratic") {
    return {seq(name, [inv](std::size_t k, double x) { return x * x - inv(k); }),
            one_d("square", [](double x) { return x * x; }), false};
  }
  std::string known;
  for (const auto& n : epi_problem_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown epi problem '" + name + "' (known: " + known + ")");
}

}  // namespace varcert
