#include "varcert/second_order.hpp"

#include <cmath>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/parallel.hpp"
#include "varcert/rng.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GraphPatch patch_at(const FunctionModel& phi, VecView x, VecView xstar) {
  if (!phi.has_patch()) {
    throw CapabilityError("second-order: model '" + phi.name() + "' has no graph patch description");
  }
  require_dim(x, phi.dim(), "second-order point");
  require_dim(xstar, phi.dim(), "second-order covector");
  if (!phi.subdiff(x).contains(xstar, 1e-9)) {
    throw PreconditionError("second-order: (x, x*) is not in the graph of ∂φ");
  }
  return phi.patch(x, xstar);
}

/// A minimizer of ⟨z, w⟩ over the set, or nullopt when the set is empty or
/// the infimum is −∞.
std::optional<Vec> argmin_pairing(const SubdiffSet& s, VecView w) {
  if (s.is_empty()) return std::nullopt;
  switch (s.kind()) {
    case SubdiffSet::Kind::kPoints: {
      const Vec* best = nullptr;
      double bv = kInf;
      for (const auto& p : s.point_list()) {
        const double v = dot(p, w);
        if (v < bv) {
          bv = v;
          best = &p;
        }
      }
      return *best;
    }
    case SubdiffSet::Kind::kIntervals: {
      const auto& ivs = s.interval_list();
      const double z = w[0] >= 0.0 ? ivs.front().lo : ivs.back().hi;
      if (!std::isfinite(z)) return std::nullopt;
      return Vec{z};
    }
    case SubdiffSet::Kind::kBox: {
      Vec z(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        z[i] = w[i] >= 0.0 ? s.box_lo()[i] : s.box_hi()[i];
        if (!std::isfinite(z[i])) return std::nullopt;
      }
      return z;
    }
    case SubdiffSet::Kind::kPolyhedral: {
      const Vec* best = nullptr;
      double bv = kInf;
      for (const auto& p : s.generators()) {
        const double v = dot(p, w);
        if (v < bv) {
          bv = v;
          best = &p;
        }
      }
      return *best;
    }
    case SubdiffSet::Kind::kEmpty:
      break;
  }
  return std::nullopt;
}

}  // namespace

NormalCone graph_regular_normal_cone(const FunctionModel& phi, VecView x, VecView xstar) {
  return regular_normal_cone(patch_at(phi, x, xstar));
}

SubdiffSet combined_second_subdiff(const FunctionModel& phi, VecView x, VecView xstar, VecView w) {
  require_dim(w, phi.dim(), "combined_second_subdiff");
  return combined_slice(patch_at(phi, x, xstar), w);
}

SubdiffSet limiting_second_subdiff(const FunctionModel& phi, VecView xbar, VecView xbar_star, VecView w) {
  require_dim(w, phi.dim(), "limiting_second_subdiff");
  return limiting_slice(patch_at(phi, xbar, xbar_star), w);
}

const char* to_string(SecondOrderFlavor f) { return f == SecondOrderFlavor::kCombined ? "combined" : "limiting"; }

SecondOrderFlavor flavor_from_string(const std::string& s) {
  if (s == "combined") return SecondOrderFlavor::kCombined;
  if (s == "limiting") return SecondOrderFlavor::kLimiting;
  throw InputError("unknown second-order flavor '" + s + "' (expected combined or limiting)");
}

std::vector<Vec> unit_directions(std::size_t n, std::uint64_t seed) {
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
    e[i] = -1.0;
    dirs.push_back(e);
  }
  if (n == 1) return dirs;
  Rng rng(seed);
  for (int k = 0; k < 8; ++k) {
    Vec d(n);
    double nd = 0.0;
    while (!(nd > 1e-3)) {
      for (auto& v : d) v = rng.uniform(-1.0, 1.0);
      nd = euclidean_norm(d);
    }
    for (auto& v : d) v /= nd;
    dirs.push_back(d);
  }
  return dirs;
}

CertificateReport psd_certify(const FunctionModel& phi, const Window& w, double sigma, const SamplePlan& plan,
                              const NormModel& m, SecondOrderFlavor flavor, const Tolerances& tol) {
  if (!(sigma >= 0.0)) throw InputError("psd_certify: σ must be nonnegative");
  if (!phi.has_patch()) throw CapabilityError("psd_certify: model '" + phi.name() + "' has no graph patches");
  const auto samples = graph_samples(phi, w, plan, m, {.attentive = false});
  const auto dirs = unit_directions(phi.dim(), plan.seed);
  const std::size_t nd = dirs.size();

  struct Cell {
    double slack = kInf;
    bool tested = false;
    bool empty = true;
  };
  const auto cells = parallel_map<std::vector<Cell>>(samples.size(), [&](std::size_t i) {
    const GraphPatch patch = phi.patch(samples[i].x, samples[i].xstar);
    std::vector<Cell> row(nd);
    for (std::size_t k = 0; k < nd; ++k) {
      const SubdiffSet set = flavor == SecondOrderFlavor::kCombined ? combined_slice(patch, dirs[k])
                                                                    : limiting_slice(patch, dirs[k]);
      if (set.is_empty()) continue;
      const double nw = m.norm(dirs[k]);
      row[k] = {set.min_pairing(dirs[k]) - sigma * nw * nw, true, false};
    }
    return row;
  });

  CertificateReport rep;
  rep.check = "psd";
  rep.tolerance = tol.cert_tol;
  nlohmann::json wj;
  to_json(wj, w);
  rep.params = {{"window", wj}, {"sigma", sigma}, {"flavor", to_string(flavor)}, {"samples", samples.size()},
                {"directions", nd}};
  WorstK worst;
  std::size_t empty_sets = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = 0; k < nd; ++k) {
      if (!cells[i][k].tested) {
        ++empty_sets;
        continue;
      }
      ++rep.tested;
      worst.offer(cells[i][k].slack, static_cast<std::uint64_t>(i) * nd + k);
    }
  }
  rep.margin = worst.empty() ? kInf : worst.min_slack();
  for (const auto& e : worst.entries()) {
    const auto& s = samples[e.key / nd];
    const Vec& dir = dirs[e.key % nd];
    const GraphPatch patch = phi.patch(s.x, s.xstar);
    const SubdiffSet set =
        flavor == SecondOrderFlavor::kCombined ? combined_slice(patch, dir) : limiting_slice(patch, dir);
    const auto z = argmin_pairing(set, dir);
    const double nw = m.norm(dir);
    nlohmann::json in = {{"x", s.x}, {"xstar", s.xstar}, {"w", dir}};
    in["z"] = z ? nlohmann::json(*z) : nlohmann::json("unbounded");
    rep.witnesses.push_back({in, e.slack + sigma * nw * nw, sigma * nw * nw});
  }
  rep.result = {{"empty_sets", empty_sets}};
  if (samples.empty()) rep.notes.push_back("no graph samples in the window");
  settle(rep);
  return rep;
}

CertificateReport pointbased_check(const FunctionModel& phi, VecView xbar, const SamplePlan& plan,
                                   const Tolerances& tol) {
  const Vec zero(phi.dim(), 0.0);
  if (!phi.subdiff(xbar).contains(zero, 1e-9)) throw PreconditionError("pointbased_check: 0 ∉ ∂φ(x̄)");
  const GraphPatch patch = patch_at(phi, xbar, zero);
  const auto dirs = unit_directions(phi.dim(), plan.seed);

  CertificateReport rep;
  rep.check = "pointbased";
  rep.tolerance = tol.cert_tol;
  rep.params = {{"xbar", Vec(xbar.begin(), xbar.end())}, {"directions", dirs.size()}};
  rep.margin = kInf;
  auto sets = nlohmann::json::array();
  std::vector<std::pair<double, Witness>> found;
  for (const auto& dir : dirs) {
    const SubdiffSet s = limiting_slice(patch, dir);
    nlohmann::json sj;
    to_json(sj, s);
    sets.push_back({{"w", dir}, {"set", sj}});
    if (s.is_empty()) continue;
    ++rep.tested;
    const double v = s.min_pairing(dir);
    rep.margin = std::min(rep.margin, v);
    const auto z = argmin_pairing(s, dir);
    nlohmann::json in = {{"w", dir}};
    in["z"] = z ? nlohmann::json(*z) : nlohmann::json("unbounded");
    found.push_back({v, {in, v, tol.cert_tol}});
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < found.size() && i < kMaxWitnesses; ++i) rep.witnesses.push_back(found[i].second);
  rep.result = {{"sets", sets}};
  if (rep.tested == 0) {
    rep.verdict = Verdict::kVacuous;
    rep.notes.push_back("every second-order set is empty at this point");
  } else {
    rep.verdict = rep.margin > tol.cert_tol ? Verdict::kCertified : Verdict::kRefuted;
  }
  return rep;
}

}  // namespace varcert
