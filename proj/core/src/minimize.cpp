#include "varcert/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "varcert/parallel.hpp"
#include "varcert/subdiff_set.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe(double v) { return std::isnan(v) ? kInf : v; }

struct Refined {
  Vec x;
  double value;
  std::size_t iterations;
  bool converged;
};

Refined compass(const std::function<double(VecView)>& f, const Box& box, Vec x, double fx, Vec h,
                const MinimizeOptions& opts) {
  const std::size_t n = x.size();
  std::size_t iters = 0;
  const auto max_h = [&h] { return *std::max_element(h.begin(), h.end()); };
  Vec y(n);
  while (max_h() >= opts.min_step && iters < opts.max_iterations) {
    double best = fx;
    Vec best_x;
    for (std::size_t j = 0; j < n; ++j) {
      for (double s : {1.0, -1.0}) {
        y = x;
        y[j] = std::clamp(x[j] + s * h[j], box.lo[j], box.hi[j]);
        if (y[j] == x[j]) continue;
        const double fy = safe(f(y));
        ++iters;
        if (fy < best) {
          best = fy;
          best_x = y;
        }
      }
    }
    if (!best_x.empty()) {
      x = std::move(best_x);
      fx = best;
    } else {
      for (auto& v : h) v *= 0.5;
    }
  }
  return {std::move(x), fx, iters, max_h() < opts.min_step};
}

}  // namespace

double EnvelopeResult::cluster_diameter() const {
  double d = 0.0;
  for (std::size_t a = 0; a < minimizers.size(); ++a)
    for (std::size_t b = a + 1; b < minimizers.size(); ++b)
      d = std::max(d, euclidean_distance(minimizers[a], minimizers[b]));
  return d;
}

bool EnvelopeResult::single_valued(double cluster_tol) const {
  return std::isfinite(value) && !minimizers.empty() && cluster_diameter() <= cluster_tol;
}

void to_json(nlohmann::json& j, const EnvelopeResult& r) {
  const auto& d = r.diagnostics;
  j = {{"value", real_to_json(r.value)},
       {"minimizers", r.minimizers},
       {"diagnostics",
        {{"grid_stage_min", real_to_json(d.grid_stage_min)},
         {"grid_points", d.grid_points},
         {"candidates", d.candidates},
         {"refine_iterations", d.refine_iterations},
         {"converged", d.converged},
         {"boundary_hit", d.boundary_hit},
         {"unbounded_suspected", d.unbounded_suspected}}}};
}

EnvelopeResult minimize_on_box(const std::function<double(VecView)>& f, const SamplePlan& plan,
                               const std::vector<Vec>& extra_points, const MinimizeOptions& opts) {
  plan.validate();
  const Box& box = plan.box;
  const std::size_t n = box.dim();
  const std::vector<Vec> grid = plan.grid_points();
  std::vector<Vec> pts = grid;
  for (const auto& q : plan.qmc_sequence()) pts.push_back(q);
  for (const auto& e : extra_points)
    if (e.size() == n && box.contains(e)) pts.push_back(e);

  const std::vector<double> vals =
      parallel_map<double>(pts.size(), [&](std::size_t i) { return safe(f(pts[i])); });

  EnvelopeResult res;
  res.diagnostics.grid_points = pts.size();
  const double incumbent = *std::min_element(vals.begin(), vals.end());
  res.diagnostics.grid_stage_min = incumbent;
  if (!std::isfinite(incumbent)) {
    res.value = kInf;
    return res;
  }

  // discrete local minima of the tensor grid
  const std::size_t g = plan.grid_per_axis;
  std::vector<std::size_t> local;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(vals[i])) continue;
    bool is_min = true;
    std::size_t stride = 1;
    for (std::size_t ax = n; ax-- > 0 && is_min;) {
      const std::size_t coord = (i / stride) % g;
      if (coord > 0 && vals[i - stride] < vals[i]) is_min = false;
      if (coord + 1 < g && vals[i + stride] < vals[i]) is_min = false;
      stride *= g;
    }
    if (is_min) local.push_back(i);
  }
  const auto by_value = [&vals](std::size_t a, std::size_t b) {
    return vals[a] < vals[b] || (vals[a] == vals[b] && a < b);
  };
  std::sort(local.begin(), local.end(), by_value);
  if (local.size() > opts.max_local_candidates) local.resize(opts.max_local_candidates);

  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (vals[i] <= incumbent + 10.0 * opts.value_tol) tied.push_back(i);
  std::sort(tied.begin(), tied.end(), by_value);
  if (tied.size() > opts.max_tied_candidates) tied.resize(opts.max_tied_candidates);

  std::vector<std::size_t> off_grid;
  for (std::size_t i = grid.size(); i < pts.size(); ++i)
    if (std::isfinite(vals[i])) off_grid.push_back(i);
  std::sort(off_grid.begin(), off_grid.end(), by_value);
  if (off_grid.size() > 8) off_grid.resize(8);

  std::vector<std::size_t> cand = local;
  cand.insert(cand.end(), tied.begin(), tied.end());
  cand.insert(cand.end(), off_grid.begin(), off_grid.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  res.diagnostics.candidates = cand.size();

  Vec h0(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = box.hi[j] - box.lo[j];
    h0[j] = g > 1 ? w / static_cast<double>(g - 1) : 0.25 * w;
    if (!(h0[j] > 0.0)) h0[j] = opts.min_step;
  }
  const std::vector<Refined> refined = parallel_map<Refined>(cand.size(), [&](std::size_t c) {
    return compass(f, box, pts[cand[c]], vals[cand[c]], h0, opts);
  });

  double best = kInf;
  for (const auto& r : refined) {
    best = std::min(best, r.value);
    res.diagnostics.refine_iterations += r.iterations;
    res.diagnostics.converged = res.diagnostics.converged && r.converged;
  }
  std::vector<const Refined*> keep;
  for (const auto& r : refined)
    if (r.value <= best + opts.value_tol) keep.push_back(&r);
  std::sort(keep.begin(), keep.end(), [](const Refined* a, const Refined* b) {
    return a->value < b->value || (a->value == b->value && lex_less(a->x, b->x));
  });
  for (const Refined* r : keep) {
    bool merged = false;
    for (const auto& m : res.minimizers) merged = merged || max_abs_distance(m, r->x) <= opts.merge_tol;
    if (!merged) res.minimizers.push_back(r->x);
  }
  std::sort(res.minimizers.begin(), res.minimizers.end(),
            [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  res.value = best;
  for (const auto& m : res.minimizers) {
    for (std::size_t j = 0; j < n; ++j) {
      const double slack = 1e-12 * std::max(1.0, box.hi[j] - box.lo[j]);
      if (m[j] <= box.lo[j] + slack || m[j] >= box.hi[j] - slack) res.diagnostics.boundary_hit = true;
    }
  }
  return res;
}

}  // namespace varcert
