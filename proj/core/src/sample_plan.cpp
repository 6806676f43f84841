#include "varcert/sample_plan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varcert/errors.hpp"
#include "varcert/rng.hpp"

namespace varcert {

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.empty()) throw InputError("box: lo/hi dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw InputError("box: axis " + std::to_string(i) + " must satisfy finite lo <= hi");
    }
  }
}

Box Box::cube(std::size_t n, double lo, double hi) {
  return Box(Vec(n, lo), Vec(n, hi));
}

Box Box::around(VecView center, double radius) {
  Vec lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - radius;
    hi[i] = center[i] + radius;
  }
  return Box(std::move(lo), std::move(hi));
}

bool Box::contains(VecView x, double slack) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
  }
  return true;
}

Vec Box::center() const {
  Vec c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Vec Box::clamp(VecView x) const {
  Vec c(x.begin(), x.end());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = std::clamp(c[i], lo[i], hi[i]);
  return c;
}

Box Box::scaled(double factor) const {
  Vec l(lo.size()), h(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double c = 0.5 * (lo[i] + hi[i]);
    const double r = 0.5 * (hi[i] - lo[i]) * factor;
    l[i] = c - r;
    h[i] = c + r;
  }
  return Box(std::move(l), std::move(h));
}

double Box::min_half_width() const {
  double r = 0.5 * (hi[0] - lo[0]);
  for (std::size_t i = 1; i < lo.size(); ++i) r = std::min(r, 0.5 * (hi[i] - lo[i]));
  return r;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v;
  if (count == 0) return v;
  if (count == 1) return {0.5 * (lo + hi)};
  v.resize(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
  // symmetric grids hit the midpoint exactly
  if (count % 2 == 1) v[count / 2] = 0.5 * (lo + hi);
  v.back() = hi;
  return v;
}

SamplePlan::SamplePlan(std::uint64_t seed_, std::size_t grid, std::size_t qmc, Box box_)
    : seed(seed_), grid_per_axis(grid), qmc_points(qmc), box(std::move(box_)) {
  validate();
}

void SamplePlan::validate() const {
  if (box.dim() == 0) throw InputError("sample plan: empty box");
  double total = 1.0;
  for (std::size_t i = 0; i < box.dim(); ++i) total *= static_cast<double>(grid_per_axis);
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw InputError("sample plan: grid of " + std::to_string(grid_per_axis) + "^" +
                     std::to_string(box.dim()) + " points exceeds the cap");
  }
}

std::vector<Vec> SamplePlan::grid_points() const {
  validate();
  const std::size_t n = box.dim();
  if (grid_per_axis == 0) return {};
  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i) axes[i] = linspace(box.lo[i], box.hi[i], grid_per_axis);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= grid_per_axis;
  std::vector<Vec> pts;
  pts.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    Vec p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = axes[i][idx[i]];
    pts.push_back(std::move(p));
    // last axis varies fastest
    for (std::size_t i = n; i-- > 0;) {
      if (++idx[i] < grid_per_axis) break;
      idx[i] = 0;
    }
  }
  return pts;
}

namespace {

std::vector<unsigned> first_primes(std::size_t count) {
  std::vector<unsigned> primes;
  for (unsigned c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (unsigned p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<Vec> SamplePlan::qmc_sequence() const {
  const std::size_t n = box.dim();
  const auto primes = first_primes(n);
  Rng rng(seed ^ 0xA5A5A5A5DEADBEEFULL);
  Vec shift(n);
  for (auto& s : shift) s = rng.uniform();
  std::vector<Vec> pts;
  pts.reserve(qmc_points);
  for (std::size_t k = 0; k < qmc_points; ++k) {
    Vec p(n);
    for (std::size_t i = 0; i < n; ++i) {
      double u = radical_inverse(k + 1, primes[i]) + shift[i];
      u -= std::floor(u);
      p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<Vec> SamplePlan::points() const {
  auto pts = grid_points();
  auto q = qmc_sequence();
  pts.insert(pts.end(), std::make_move_iterator(q.begin()), std::make_move_iterator(q.end()));
  return pts;
}

SamplePlan SamplePlan::around(VecView center, double radius) const {
  return with_box(Box::around(center, radius));
}

SamplePlan SamplePlan::with_box(Box b) const {
  SamplePlan p = *this;
  p.box = std::move(b);
  p.validate();
  return p;
}

void to_json(nlohmann::json& j, const Box& b) { j = {{"lo", b.lo}, {"hi", b.hi}}; }

void from_json(const nlohmann::json& j, Box& b) {
  b = Box(j.at("lo").get<Vec>(), j.at("hi").get<Vec>());
}

void to_json(nlohmann::json& j, const SamplePlan& p) {
  j = {{"seed", p.seed}, {"grid", p.grid_per_axis}, {"qmc", p.qmc_points}, {"box", p.box}};
}

void from_json(const nlohmann::json& j, SamplePlan& p) {
  p = SamplePlan(j.at("seed").get<std::uint64_t>(), j.at("grid").get<std::size_t>(),
                 j.value("qmc", std::size_t{0}), j.at("box").get<Box>());
}

}  // namespace varcert
