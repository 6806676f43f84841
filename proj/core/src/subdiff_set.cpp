#include "varcert/subdiff_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "varcert/errors.hpp"
#include "varcert/rng.hpp"

namespace varcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared distance from s to the affine hull of the chosen generators, with
// the barycentric weights; returns false when the system is degenerate.
bool affine_projection(const std::vector<Vec>& gens, const std::vector<std::size_t>& subset,
                       VecView s, std::vector<double>& weights, double& dist2) {
  const std::size_t k = subset.size();
  const std::size_t n = s.size();
  const Vec& g0 = gens[subset[0]];
  if (k == 1) {
    weights = {1.0};
    dist2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) dist2 += (s[i] - g0[i]) * (s[i] - g0[i]);
    return true;
  }
  // Solve min ‖g0 + Σ_j t_j (g_j − g0) − s‖² for t via normal equations.
  const std::size_t m = k - 1;
  std::vector<Vec> d(m, Vec(n));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) d[j][i] = gens[subset[j + 1]][i] - g0[i];
  std::vector<double> a(m * m), b(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) a[r * m + c] = dot(d[r], d[c]);
    double br = 0.0;
    for (std::size_t i = 0; i < n; ++i) br += d[r][i] * (s[i] - g0[i]);
    b[r] = br;
  }
  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
    if (std::abs(a[piv * m + col]) < 1e-14) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < m; ++c) std::swap(a[col * m + c], a[piv * m + c]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r * m + col] / a[col * m + col];
      for (std::size_t c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> t(m);
  for (std::size_t r = m; r-- > 0;) {
    double v = b[r];
    for (std::size_t c = r + 1; c < m; ++c) v -= a[r * m + c] * t[c];
    t[r] = v / a[r * m + r];
  }
  weights.assign(k, 0.0);
  weights[0] = 1.0 - std::accumulate(t.begin(), t.end(), 0.0);
  for (std::size_t j = 0; j < m; ++j) weights[j + 1] = t[j];
  dist2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = g0[i];
    for (std::size_t j = 0; j < m; ++j) p += t[j] * d[j][i];
    dist2 += (p - s[i]) * (p - s[i]);
  }
  return true;
}

// Euclidean distance from s to conv(gens) by enumerating supporting faces.
double hull_distance(const std::vector<Vec>& gens, VecView s) {
  const std::size_t n = s.size();
  const std::size_t m = gens.size();
  const std::size_t max_k = std::min(m, n + 1);
  double best = kInf;
  std::vector<std::size_t> subset;
  std::vector<double> w;
  // iterate subsets by bitmask; generator counts here are small
  if (m > 20) throw CapabilityError("polyhedral membership: too many generators");
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
    if (k > max_k) continue;
    subset.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    double d2 = 0.0;
    if (!affine_projection(gens, subset, s, w, d2)) continue;
    bool inside = true;
    for (double wi : w) inside = inside && wi >= -1e-12;
    if (inside) best = std::min(best, d2);
  }
  return std::sqrt(best);
}

}  // namespace

SubdiffSet SubdiffSet::empty(std::size_t n) {
  SubdiffSet s;
  s.kind_ = Kind::kEmpty;
  s.dim_ = n;
  return s;
}

SubdiffSet SubdiffSet::point(Vec p) { return points({std::move(p)}); }

SubdiffSet SubdiffSet::points(std::vector<Vec> pts) {
  if (pts.empty()) throw InputError("subdiff set: empty point list; use empty()");
  SubdiffSet s;
  s.kind_ = Kind::kPoints;
  s.dim_ = pts.front().size();
  for (const auto& p : pts)
    if (p.size() != s.dim_) throw InputError("subdiff set: mixed point dimensions");
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  s.points_ = std::move(pts);
  return s;
}

SubdiffSet SubdiffSet::intervals(std::vector<Interval> pieces) {
  SubdiffSet s;
  s.kind_ = Kind::kIntervals;
  s.dim_ = 1;
  for (const auto& iv : pieces) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) {
      throw InputError("subdiff set: interval needs lo <= hi");
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  for (const auto& iv : pieces) {
    if (!s.intervals_.empty() && iv.lo <= s.intervals_.back().hi) {
      s.intervals_.back().hi = std::max(s.intervals_.back().hi, iv.hi);
    } else {
      s.intervals_.push_back(iv);
    }
  }
  if (s.intervals_.empty()) s.kind_ = Kind::kEmpty;
  return s;
}

SubdiffSet SubdiffSet::whole_line() { return interval(-kInf, kInf); }

SubdiffSet SubdiffSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.empty()) throw InputError("subdiff set: box lo/hi mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw InputError("subdiff set: box needs lo <= hi");
  SubdiffSet s;
  s.kind_ = Kind::kBox;
  s.dim_ = lo.size();
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

SubdiffSet SubdiffSet::polyhedral(std::vector<Vec> generators) {
  if (generators.empty()) throw InputError("subdiff set: polyhedral set needs generators");
  const std::size_t n = generators.front().size();
  if (n == 1) {
    double lo = kInf, hi = -kInf;
    for (const auto& g : generators) {
      lo = std::min(lo, g[0]);
      hi = std::max(hi, g[0]);
    }
    return interval(lo, hi);
  }
  SubdiffSet s = points(std::move(generators));
  if (s.points_.size() > 1) s.kind_ = Kind::kPolyhedral;
  return s;
}

bool SubdiffSet::is_empty() const { return kind_ == Kind::kEmpty; }

bool SubdiffSet::contains(VecView v, double tol) const {
  if (v.size() != dim_) return false;
  switch (kind_) {
    case Kind::kEmpty:
      return false;
    case Kind::kPoints:
      for (const auto& p : points_)
        if (max_abs_distance(p, v) <= tol) return true;
      return false;
    case Kind::kIntervals:
      for (const auto& iv : intervals_)
        if (v[0] >= iv.lo - tol && v[0] <= iv.hi + tol) return true;
      return false;
    case Kind::kBox:
      for (std::size_t i = 0; i < dim_; ++i)
        if (v[i] < lo_[i] - tol || v[i] > hi_[i] + tol) return false;
      return true;
    case Kind::kPolyhedral:
      return hull_distance(points_, v) <= tol;
  }
  return false;
}

double SubdiffSet::distance(VecView v) const {
  require_dim(v, dim_, "SubdiffSet::distance");
  switch (kind_) {
    case Kind::kEmpty:
      return kInf;
    case Kind::kPoints: {
      double best = kInf;
      for (const auto& p : points_) best = std::min(best, euclidean_distance(p, v));
      return best;
    }
    case Kind::kIntervals: {
      double best = kInf;
      for (const auto& iv : intervals_) {
        const double d = v[0] < iv.lo ? iv.lo - v[0] : (v[0] > iv.hi ? v[0] - iv.hi : 0.0);
        best = std::min(best, d);
      }
      return best;
    }
    case Kind::kBox: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        const double d = std::max({lo_[i] - v[i], v[i] - hi_[i], 0.0});
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Kind::kPolyhedral:
      return hull_distance(points_, v);
  }
  return kInf;
}

std::vector<Vec> SubdiffSet::enumerate(VecView center, double radius, std::uint64_t seed) const {
  std::vector<Vec> out;
  switch (kind_) {
    case Kind::kEmpty:
      break;
    case Kind::kPoints:
      out = points_;
      break;
    case Kind::kIntervals: {
      // keep clipped endpoints strictly inside the open ball
      const double r = radius * (1.0 - 1e-9);
      const double c = center.empty() ? 0.0 : center[0];
      for (const auto& iv : intervals_) {
        const double lo = std::max(iv.lo, c - r);
        const double hi = std::min(iv.hi, c + r);
        if (lo > hi) continue;
        out.push_back({lo});
        if (hi > lo) {
          for (double f : {1.0 / 6.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0})
            out.push_back({lo + f * (hi - lo)});
          out.push_back({hi});
        }
      }
      break;
    }
    case Kind::kBox: {
      Vec lo(dim_), hi(dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        lo[i] = std::max(lo_[i], center[i] - radius);
        hi[i] = std::min(hi_[i], center[i] + radius);
        if (lo[i] > hi[i]) return out;
      }
      if (dim_ <= 6) {
        for (std::uint32_t mask = 0; mask < (1u << dim_); ++mask) {
          Vec v(dim_);
          for (std::size_t i = 0; i < dim_; ++i) v[i] = (mask & (1u << i)) ? hi[i] : lo[i];
          out.push_back(std::move(v));
        }
      }
      Vec mid(dim_);
      for (std::size_t i = 0; i < dim_; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
      out.push_back(mid);
      Rng rng(seed ^ 0x5bd1e995ULL);
      for (int k = 0; k < 5; ++k) {
        Vec v(dim_);
        for (std::size_t i = 0; i < dim_; ++i) v[i] = rng.uniform(lo[i], hi[i]);
        out.push_back(std::move(v));
      }
      break;
    }
    case Kind::kPolyhedral: {
      out = points_;
      Vec centroid(dim_, 0.0);
      for (const auto& g : points_)
        for (std::size_t i = 0; i < dim_; ++i) centroid[i] += g[i] / static_cast<double>(points_.size());
      out.push_back(centroid);
      int added = 0;
      for (std::size_t a = 0; a < points_.size() && added < 5; ++a)
        for (std::size_t b = a + 1; b < points_.size() && added < 5; ++b, ++added)
          out.push_back(scaled(add(points_[a], points_[b]), 0.5));
      break;
    }
  }
  return out;
}

SubdiffSet SubdiffSet::translated(VecView shift) const {
  SubdiffSet s = *this;
  switch (kind_) {
    case Kind::kEmpty:
      break;
    case Kind::kPoints:
    case Kind::kPolyhedral:
      for (auto& p : s.points_) p = add(p, shift);
      break;
    case Kind::kIntervals:
      for (auto& iv : s.intervals_) {
        iv.lo += shift[0];
        iv.hi += shift[0];
      }
      break;
    case Kind::kBox:
      s.lo_ = add(lo_, shift);
      s.hi_ = add(hi_, shift);
      break;
  }
  return s;
}

double SubdiffSet::min_pairing(VecView w) const {
  switch (kind_) {
    case Kind::kEmpty:
      return kInf;
    case Kind::kPoints:
    case Kind::kPolyhedral: {
      double m = kInf;
      for (const auto& p : points_) m = std::min(m, dot(p, w));
      return m;
    }
    case Kind::kIntervals: {
      double m = kInf;
      for (const auto& iv : intervals_) {
        double v;
        if (w[0] > 0.0) {
          v = iv.lo * w[0];
        } else if (w[0] < 0.0) {
          v = iv.hi * w[0];
        } else {
          v = 0.0;
        }
        m = std::min(m, v);
      }
      return m;
    }
    case Kind::kBox: {
      double m = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (w[i] > 0.0) m += lo_[i] * w[i];
        if (w[i] < 0.0) m += hi_[i] * w[i];
      }
      return m;
    }
  }
  return kInf;
}

SubdiffSet SubdiffSet::unite_1d(const SubdiffSet& a, const SubdiffSet& b) {
  std::vector<Interval> pieces;
  for (const SubdiffSet* s : {&a, &b}) {
    if (s->is_empty()) continue;
    if (s->dim() != 1) throw InputError("unite_1d: sets must be one-dimensional");
    if (s->kind_ == Kind::kIntervals) {
      pieces.insert(pieces.end(), s->intervals_.begin(), s->intervals_.end());
    } else if (s->kind_ == Kind::kPoints) {
      for (const auto& p : s->points_) pieces.push_back({p[0], p[0]});
    } else {
      throw InputError("unite_1d: unsupported kind");
    }
  }
  if (pieces.empty()) return empty(1);
  return intervals(std::move(pieces));
}

nlohmann::json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double real_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("expected a real number, got string '" + s + "'");
  }
  return j.get<double>();
}

void to_json(nlohmann::json& j, const SubdiffSet& s) {
  using K = SubdiffSet::Kind;
  switch (s.kind()) {
    case K::kEmpty:
      j = {{"kind", "empty"}};
      break;
    case K::kPoints:
      j = {{"kind", "points"}, {"points", s.point_list()}};
      break;
    case K::kIntervals: {
      auto arr = nlohmann::json::array();
      for (const auto& iv : s.interval_list()) arr.push_back({real_to_json(iv.lo), real_to_json(iv.hi)});
      j = {{"kind", "intervals"}, {"intervals", arr}};
      break;
    }
    case K::kBox:
      j = {{"kind", "box"}, {"lo", s.box_lo()}, {"hi", s.box_hi()}};
      break;
    case K::kPolyhedral:
      j = {{"kind", "polyhedral"}, {"generators", s.generators()}};
      break;
  }
}

SubdiffSet subdiff_set_from_json(const nlohmann::json& j, std::size_t dim) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "empty") return SubdiffSet::empty(dim);
  if (kind == "points") return SubdiffSet::points(j.at("points").get<std::vector<Vec>>());
  if (kind == "intervals" || kind == "interval") {
    std::vector<Interval> pieces;
    if (j.contains("intervals")) {
      for (const auto& iv : j.at("intervals")) pieces.push_back({real_from_json(iv.at(0)), real_from_json(iv.at(1))});
    } else {
      pieces.push_back({real_from_json(j.at("lo")), real_from_json(j.at("hi"))});
    }
    return SubdiffSet::intervals(std::move(pieces));
  }
  if (kind == "box") return SubdiffSet::box(j.at("lo").get<Vec>(), j.at("hi").get<Vec>());
  if (kind == "polyhedral") return SubdiffSet::polyhedral(j.at("generators").get<std::vector<Vec>>());
  throw InputError("unknown subdifferential kind '" + kind + "'");
}

}  // namespace varcert
