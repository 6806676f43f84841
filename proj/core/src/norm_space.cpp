#include "varcert/norm_space.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "varcert/errors.hpp"
#include "varcert/rng.hpp"

namespace varcert {

namespace {

double signed_pow(double v, double e) {
  if (v == 0.0) return 0.0;
  const double m = std::pow(std::abs(v), e);
  return v > 0.0 ? m : -m;
}

// (Σ wᵢ|xᵢ|^r)^(1/r), scaled by the max entry to avoid under/overflow.
double weighted_power_norm(VecView x, const Vec& w, double r, bool unweighted) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::pow(std::abs(x[i]) / scale, r);
    s += unweighted ? t : w[i] * t;
  }
  return scale * std::pow(s, 1.0 / r);
}

}  // namespace

NormModel::NormModel(double p, std::size_t n, Vec weights)
    : p_(p), n_(n), weights_(std::move(weights)) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InputError("norm model: exponent p must lie in (1, inf), got " + std::to_string(p));
  }
  if (n == 0) throw InputError("norm model: dimension must be positive");
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (weights_.size() != n) throw InputError("norm model: weights must have length n");
  unweighted_ = true;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("norm model: weights must be positive");
    if (w != 1.0) unweighted_ = false;
  }
  q_ = p_ / (p_ - 1.0);
  dual_weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) dual_weights_[i] = std::pow(weights_[i], 1.0 - q_);
}

double NormModel::norm(VecView x) const {
  require_dim(x, n_, "norm");
  if (is_euclidean()) return euclidean_norm(x);
  return weighted_power_norm(x, weights_, p_, unweighted_);
}

double NormModel::dual_norm(VecView xstar) const {
  require_dim(xstar, n_, "dual_norm");
  if (is_euclidean()) return euclidean_norm(xstar);
  return weighted_power_norm(xstar, dual_weights_, q_, unweighted_);
}

Vec NormModel::duality_map(VecView x) const {
  require_dim(x, n_, "duality_map");
  if (is_euclidean()) return Vec(x.begin(), x.end());
  Vec j(n_, 0.0);
  const double nx = norm(x);
  if (nx == 0.0) return j;
  // J(x)ᵢ = ‖x‖^(2−p) wᵢ |xᵢ|^(p−1) sign(xᵢ) = ‖x‖ wᵢ sign(xᵢ)(|xᵢ|/‖x‖)^(p−1)
  for (std::size_t i = 0; i < n_; ++i) {
    j[i] = nx * weights_[i] * signed_pow(x[i] / nx, p_ - 1.0);
  }
  return j;
}

Vec NormModel::inverse_duality_map(VecView xstar) const {
  require_dim(xstar, n_, "inverse_duality_map");
  if (is_euclidean()) return Vec(xstar.begin(), xstar.end());
  Vec x(n_, 0.0);
  const double ns = dual_norm(xstar);
  if (ns == 0.0) return x;
  for (std::size_t i = 0; i < n_; ++i) {
    x[i] = ns * dual_weights_[i] * signed_pow(xstar[i] / ns, q_ - 1.0);
  }
  return x;
}

double NormModel::lyapunov(VecView u, VecView x) const {
  require_dim(u, n_, "lyapunov");
  require_dim(x, n_, "lyapunov");
  if (is_euclidean()) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (u[i] - x[i]) * (u[i] - x[i]);
    return s;
  }
  const double nu = norm(u);
  const double nx = norm(x);
  return nu * nu - 2.0 * dot(duality_map(u), x) + nx * nx;
}

double NormModel::squared_distance(VecView a, VecView b) const {
  require_dim(a, n_, "squared_distance");
  require_dim(b, n_, "squared_distance");
  if (is_euclidean()) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  }
  const double d = distance(a, b);
  return d * d;
}

NormFn as_norm_fn(const NormModel& m) {
  return [m](VecView x) { return m.norm(x); };
}

NormFn weighted_l1_norm(Vec weights) {
  return [w = std::move(weights)](VecView x) {
    require_dim(x, w.size(), "weighted_l1_norm");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
    return s;
  };
}

ModulusEstimate estimate_strong_mono_modulus(const NormModel& m, const SamplePlan& plan) {
  if (plan.dim() != m.dim()) throw InputError("estimate_strong_mono_modulus: plan/norm dimension mismatch");
  const std::size_t count = std::max<std::size_t>(plan.qmc_points, 100);
  Rng rng(plan.seed);
  ModulusEstimate est;
  est.value = std::numeric_limits<double>::infinity();
  const std::size_t n = m.dim();
  Vec x(n), y(n);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(plan.box.lo[i], plan.box.hi[i]);
    for (std::size_t i = 0; i < n; ++i) y[i] = rng.uniform(plan.box.lo[i], plan.box.hi[i]);
    const Vec d = sub(x, y);
    double nd2 = 0.0;
    if (m.is_euclidean()) {
      nd2 = dot(d, d);
    } else {
      const double nd = m.norm(d);
      nd2 = nd * nd;
    }
    if (nd2 == 0.0) continue;
    const double ratio = dot(sub(m.duality_map(x), m.duality_map(y)), d) / nd2;
    ++est.pairs;
    if (ratio < est.value) {
      est.value = ratio;
      est.argmin_x = x;
      est.argmin_y = y;
    }
  }
  if (est.pairs == 0) throw InputError("estimate_strong_mono_modulus: plan yields no distinct pairs");
  return est;
}

void to_json(nlohmann::json& j, const NormModel& m) {
  j = {{"p", m.p()}, {"n", m.dim()}, {"weights", m.weights()}};
}

NormModel norm_model_from_json(const nlohmann::json& j) {
  return NormModel(j.at("p").get<double>(), j.at("n").get<std::size_t>(),
                   j.value("weights", Vec{}));
}

}  // namespace varcert
