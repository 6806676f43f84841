#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace varcert;

namespace {

const NormModel kE1 = NormModel::euclidean(1);
const SamplePlan kPlan(1, 101, 0, Box::cube(1, -1.0, 1.0));
const Vec kZero{0.0};

std::vector<GraphSample> from_pairs(const std::vector<std::pair<double, double>>& pts) {
  std::vector<GraphSample> out;
  for (const auto& [x, y] : pts) out.push_back({{x}, {y}, 0.0});
  return out;
}

double brute_gap(const std::vector<GraphSample>& s, const std::function<double(const GraphSample&, const GraphSample&)>& f) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) g = std::min(g, f(s[i], s[j]));
  return g;
}

std::vector<GraphSample> random_samples(std::size_t n, std::size_t count, std::uint64_t seed,
                                        const std::function<Vec(const Vec&)>& grad) {
  Rng rng(seed);
  std::vector<GraphSample> out;
  for (std::size_t k = 0; k < count; ++k) {
    Vec x(n);
    for (auto& c : x) c = rng.uniform(-1.0, 1.0);
    out.push_back({x, grad(x), 0.0});
  }
  return out;
}

}  // namespace

TEST(MonotoneGap, HandArithmetic) {
  const PairGap g = monotone_gap(from_pairs({{0.0, -1.0}, {1.0, -2.0}}));
  EXPECT_DOUBLE_EQ(g.gap, -1.0);
  EXPECT_EQ(g.pairs, 1u);
  EXPECT_DOUBLE_EQ(monotone_gap(from_pairs({{-1.0, -1.0}, {1.0, 1.0}})).gap, 4.0);
  EXPECT_DOUBLE_EQ(strong_gap_norm(from_pairs({{0.0, 0.0}, {1.0, 0.0}}), 1.0, kE1).gap, -1.0);
  EXPECT_THROW(monotone_gap(from_pairs({{0.0, 0.0}})), InputError);
}

TEST(MonotoneGap, MatchesExhaustiveScan) {
  const auto s = random_samples(1, 120, 5, [](const Vec& x) { return Vec{x[0] * x[0] * x[0] - 0.5 * x[0]}; });
  const PairGap g = monotone_gap(s);
  const double brute = brute_gap(s, [](const GraphSample& a, const GraphSample& b) {
    return (a.xstar[0] - b.xstar[0]) * (a.x[0] - b.x[0]);
  });
  EXPECT_DOUBLE_EQ(g.gap, brute);
  EXPECT_EQ(g.pairs, 120u * 119u / 2u);
  const auto& a = s[g.i];
  const auto& b = s[g.j];
  EXPECT_DOUBLE_EQ((a.xstar[0] - b.xstar[0]) * (a.x[0] - b.x[0]), g.gap);
}

TEST(MonotoneGap, SubsamplesAboveCap) {
  const auto s = random_samples(1, 600, 6, [](const Vec& x) { return x; });
  const PairGap g = monotone_gap(s, 3);
  EXPECT_EQ(g.pairs, kMaxPairs);
  EXPECT_GE(g.gap, 0.0);
  EXPECT_EQ(monotone_gap(s, 3).gap, g.gap);
}

TEST(StrongGap, Examples) {
  const auto quad = random_samples(1, 50, 1, [](const Vec& x) { return scaled(x, 2.0); });
  EXPECT_NEAR(strong_gap_duality(quad, 2.0, kE1).gap, 0.0, 1e-15);
  const auto half = random_samples(1, 50, 1, [](const Vec& x) { return x; });
  EXPECT_LT(strong_gap_duality(half, 2.0, kE1).gap, 0.0);
  for (double p : {1.5, 3.0}) {
    const NormModel m(p, 3);
    const auto s = random_samples(3, 60, 2, [&](const Vec& x) { return scaled(m.duality_map(x), 1.5); });
    EXPECT_NEAR(strong_gap_duality(s, 1.5, m).gap, 0.0, 1e-12);
  }
}

TEST(StrongGap, OrderingAndHilbertEquivalence) {
  for (double p : {1.5, 2.0, 4.0}) {
    const NormModel m(p, 2);
    const auto s = random_samples(2, 80, 9, [](const Vec& x) { return Vec{std::sin(3 * x[0]), x[1] * x[1]}; });
    const double g0 = monotone_gap(s).gap;
    for (double sigma : {0.1, 0.5, 2.0}) {
      EXPECT_LE(strong_gap_duality(s, sigma, m).gap, g0 + 1e-12);
      if (p == 2.0) EXPECT_NEAR(strong_gap_duality(s, sigma, m).gap, strong_gap_norm(s, sigma, m).gap, 1e-12);
    }
  }
}

TEST(StrongGap, ShiftPreservation) {
  for (double p : {1.5, 2.0, 3.0}) {
    const NormModel m(p, 2);
    for (double sigma : {0.5, 2.0}) {
      // convex gradient x ↦ (x₁³, x₂) shifted by σJ
      const auto s = random_samples(2, 80, 4, [&](const Vec& x) {
        return add(Vec{x[0] * x[0] * x[0], x[1]}, scaled(m.duality_map(x), sigma));
      });
      EXPECT_GE(strong_gap_duality(s, sigma, m).gap, -1e-12);
    }
  }
}

TEST(StrongGap, L1SquareNormSide) {
  const std::size_t m = 32;
  const FunctionModel phi = models::l1_weighted_square(m);
  Rng rng(10);
  std::vector<GraphSample> s;
  for (int k = 0; k < 46; ++k) {
    Vec x(m);
    for (auto& c : x) c = rng.uniform(-1.0, 1.0);
    s.push_back({x, phi.subdiff(x).point_list().front(), phi.value(x)});
  }
  const PairGap g = strong_gap_norm(s, 2.0, l1_grid_norm(m));
  EXPECT_GE(g.pairs, 1000u);
  EXPECT_GE(g.gap, -1e-6);
}

TEST(LocalMono, Examples) {
  const auto zo = local_mono_certify(models::zero_one(), Window(kZero, kZero, 0.5, 0.5, 0.5), 1.0,
                                     MonoKind::kDuality, kPlan, kE1);
  EXPECT_TRUE(zo.certified());
  const auto neg = local_mono_certify(oracle::negative_square(), Window(kZero, kZero, 0.5, 0.5, 1.0), 0.0,
                                      MonoKind::kDuality, kPlan, kE1);
  ASSERT_TRUE(neg.refuted());
  ASSERT_FALSE(neg.witnesses.empty());
  EXPECT_LT(neg.witnesses.front().slack(), -1e-6);
  const auto hub = local_mono_certify(models::huber(0.5, 1), Window(kZero, kZero, 1.0, 1.0, 5.0), 0.0,
                                      MonoKind::kNorm, kPlan, kE1);
  EXPECT_TRUE(hub.certified());
  EXPECT_EQ(mono_kind_from_string(to_string(MonoKind::kNorm)), MonoKind::kNorm);
  EXPECT_THROW(mono_kind_from_string("other"), InputError);
}

TEST(LocalMono, WitnessReproducesSlack) {
  const auto r = local_mono_certify(oracle::negative_square(), Window(kZero, kZero, 0.5, 0.5, 1.0), 0.0,
                                    MonoKind::kDuality, kPlan, kE1);
  ASSERT_TRUE(r.refuted());
  const auto& in = r.witnesses.front().inputs;
  const double x1 = in.at("first").at("x").at(0), y1 = in.at("first").at("xstar").at(0);
  const double x2 = in.at("second").at("x").at(0), y2 = in.at("second").at("xstar").at(0);
  EXPECT_DOUBLE_EQ(y1, -2.0 * x1);
  EXPECT_DOUBLE_EQ(y2, -2.0 * x2);
  EXPECT_DOUBLE_EQ((y1 - y2) * (x1 - x2), r.witnesses.front().slack());
  EXPECT_LT((y1 - y2) * (x1 - x2), -r.tolerance);
}

TEST(Resolvent, QuadraticIsLinear) {
  const auto r = resolvent_probe(models::quadratic(1.0, 1), 1.0, Window(kZero, kZero, 1.0, 1.0, 1e9), kE1, kPlan);
  ASSERT_TRUE(r.certified());
  EXPECT_TRUE(r.result.at("single_valued").get<bool>());
  EXPECT_NEAR(r.result.at("modulus").get<double>(), 0.5, 1e-6);
  for (const auto& s : r.result.at("solutions")) {
    if (s.at("x").is_null()) continue;
    EXPECT_NEAR(s.at("x").get<double>(), s.at("ystar").get<double>() / 2.0, 1e-8);
  }
}

TEST(Resolvent, AbsIsShrinkage) {
  const auto r =
      resolvent_probe(models::abs_value(1), 1.0, Window(kZero, Vec{0.5}, 0.5, 0.5, 1e9), kE1, kPlan);
  ASSERT_TRUE(r.certified());
  for (const auto& s : r.result.at("solutions")) {
    if (s.at("x").is_null()) continue;
    const double y = s.at("ystar");
    EXPECT_NEAR(s.at("x").get<double>(), std::copysign(std::max(std::abs(y) - 1.0, 0.0), y), 1e-8);
  }
}

TEST(Resolvent, NegativeSquareIsRefuted) {
  EXPECT_TRUE(
      resolvent_probe(oracle::negative_square(), 1.0, Window(kZero, kZero, 0.5, 0.5, 1e9), kE1, kPlan).refuted());
}

TEST(LocalMono, VariationalConvexityImpliesMonotone) {
  const std::vector<std::pair<FunctionModel, Window>> cases = {
      {models::zero_one(), Window(kZero, kZero, 0.5, 0.5, 0.5)},
      {models::abs_value(1), Window(kZero, kZero, 0.5, 0.5, 5.0)},
      {models::huber(0.5, 1), Window(kZero, kZero, 0.8, 0.8, 5.0)},
      {models::quadratic(2.0, 1), Window(kZero, kZero, 0.5, 0.5, 5.0)},
      {models::staircase(), Window(kZero, kZero, 0.3, 0.3, 0.1)},
  };
  for (const auto& [phi, w] : cases) {
    const auto vc = certify_variational_convexity(phi, kZero, kZero, 0.0, w, kE1, kPlan);
    const auto mono = local_mono_certify(phi, w, 0.0, MonoKind::kDuality, kPlan, kE1);
    if (vc.certified()) EXPECT_TRUE(mono.certified()) << phi.name();
  }
}
