#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace varcert;

namespace {

const NormModel kE1 = NormModel::euclidean(1);
const SamplePlan kPlan(1, 101, 0, Box::cube(1, -1.0, 1.0));
const Vec kZero{0.0};
const Vec kUp{1.0};
const Vec kDown{-1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

// {z : ⟨(z, −w), t⟩ ≤ 0 for every tangent t}; brute force over a z-grid.
std::vector<double> polar_slice(const std::vector<Vec>& tangents, double w) {
  std::vector<double> zs;
  for (int i = -400; i <= 400; ++i) {
    const double z = i / 100.0;
    bool in = true;
    for (const auto& t : tangents) in = in && z * t[0] - w * t[1] <= 1e-12;
    if (in) zs.push_back(z);
  }
  return zs;
}

void expect_slice_matches(const SubdiffSet& set, const std::vector<Vec>& tangents, double w) {
  const auto zs = polar_slice(tangents, w);
  for (int i = -400; i <= 400; ++i) {
    const double z = i / 100.0;
    const bool oracle = std::find(zs.begin(), zs.end(), z) != zs.end();
    EXPECT_EQ(set.contains(Vec{z}, 1e-12), oracle) << "z=" << z << " w=" << w;
  }
}

}  // namespace

TEST(NormalCone, AbsAtKink) {
  const NormalCone c = graph_regular_normal_cone(models::abs_value(1), kZero, Vec{0.3});
  ASSERT_FALSE(c.smooth);
  for (const auto& g : c.generators()) EXPECT_EQ(g[1], 0.0);
  for (const auto& w : {kUp, kDown}) EXPECT_EQ(combined_second_subdiff(models::abs_value(1), kZero, Vec{0.3}, w).kind(),
                                               SubdiffSet::Kind::kEmpty);
  EXPECT_TRUE(combined_second_subdiff(models::abs_value(1), kZero, Vec{0.3}, kZero).contains(Vec{-123.0}));
}

TEST(NormalCone, AbsCornerMatchesPolar) {
  // at (0, 1) the graph is the ray down the segment and the ray along x* = 1
  const std::vector<Vec> tangents{{0.0, -1.0}, {1.0, 0.0}};
  for (double w : {-1.0, 0.0, 1.0})
    expect_slice_matches(combined_second_subdiff(models::abs_value(1), kZero, kUp, Vec{w}), tangents, w);
}

TEST(CombinedSet, SmoothLine) {
  for (double alpha : {0.5, 1.0, 3.0}) {
    const FunctionModel q = models::quadratic(alpha, 1);
    for (double x : {-0.7, 0.0, 0.4})
      for (double w : {-2.0, -1.0, 0.5, 1.0}) {
        const SubdiffSet s = combined_second_subdiff(q, Vec{x}, Vec{alpha * x}, Vec{w});
        ASSERT_EQ(s.point_list().size(), 1u);
        EXPECT_NEAR(s.point_list()[0][0], alpha * w, 1e-14);
      }
  }
}

TEST(CombinedSet, QuadraticInTwoDimensions) {
  const FunctionModel q = models::quadratic(2.0, 2);
  const Vec x{0.3, -0.2};
  const SubdiffSet s = combined_second_subdiff(q, x, Vec{0.6, -0.4}, Vec{1.0, 2.0});
  EXPECT_TRUE(s.contains(Vec{2.0, 4.0}, 1e-12));
  EXPECT_FALSE(s.contains(Vec{2.0, 3.0}, 1e-6));
}

TEST(CombinedSet, StaircaseStrata) {
  const FunctionModel s = models::staircase();
  for (int k = 4; k <= 10; ++k) {
    const double concave = models::staircase_kink_concave(k);
    const double convex = models::staircase_kink_convex(k);
    const double flat = 0.5 * (concave + 1.0 / k);
    const SubdiffSet on_flat = combined_second_subdiff(s, Vec{flat}, kZero, kUp);
    ASSERT_EQ(on_flat.point_list().size(), 1u);
    EXPECT_EQ(on_flat.point_list()[0][0], 0.0);
    // the flat piece starts at the concave kink, so the tangent cone is one ray
    expect_slice_matches(combined_second_subdiff(s, Vec{concave}, kZero, kUp), {{1.0, 0.0}}, 1.0);
    // inside the vertical segment at a convex kink
    const double mid_star = 0.5 * (k + 2.0) / (k + 1.0);
    EXPECT_EQ(combined_second_subdiff(s, Vec{convex}, Vec{mid_star}, kUp).kind(), SubdiffSet::Kind::kEmpty) << k;
  }
}

TEST(LimitingSet, StaircaseOrigin) {
  const SubdiffSet lim = limiting_second_subdiff(models::staircase(), kZero, kZero, kUp);
  EXPECT_TRUE(lim.contains(kZero));
  EXPECT_TRUE(lim.contains(Vec{-5.0}));
  EXPECT_TRUE(lim.contains(Vec{5.0}));
}

TEST(LimitingSet, ContainsCombinedOnGallery) {
  for (const auto& name : {"abs", "quadratic", "huber_source", "zero_one", "staircase"}) {
    const FunctionModel phi = gallery_lookup(name);
    const auto samples = graph_samples(phi, Window(kZero, kZero, 0.9, 2.0, kInf), kPlan, kE1);
    int checked = 0;
    for (const auto& g : samples)
      for (const auto& w : {kUp, kDown}) {
        const SubdiffSet comb = combined_second_subdiff(phi, g.x, g.xstar, w);
        const SubdiffSet limit = limiting_second_subdiff(phi, g.x, g.xstar, w);
        for (const auto& z : comb.enumerate(kZero, 3.0)) {
          EXPECT_TRUE(limit.contains(z, 1e-12)) << name << " x=" << g.x[0];
          ++checked;
        }
      }
    EXPECT_GT(checked, 0) << name;
  }
}

TEST(LimitingSet, ZeroOneAtOrigin) {
  const FunctionModel zo = models::zero_one();
  EXPECT_EQ(combined_second_subdiff(zo, kZero, kZero, kUp).kind(), SubdiffSet::Kind::kEmpty);
  // the graph is a cross at the origin, so the regular normal cone is {0}
  const SubdiffSet at_zero = combined_second_subdiff(zo, kZero, kZero, kZero);
  EXPECT_TRUE(at_zero.contains(kZero));
  EXPECT_FALSE(at_zero.contains(Vec{0.5}));
  EXPECT_TRUE(combined_second_subdiff(zo, kZero, Vec{0.4}, kZero).contains(Vec{7.0}));
  EXPECT_TRUE(limiting_second_subdiff(zo, kZero, kZero, kUp).contains(kZero));
}

TEST(Flavor, RoundTrip) {
  for (auto f : {SecondOrderFlavor::kCombined, SecondOrderFlavor::kLimiting})
    EXPECT_EQ(flavor_from_string(to_string(f)), f);
  EXPECT_THROW(flavor_from_string("bogus"), InputError);
}

TEST(Directions, UnitAndDeterministic) {
  EXPECT_EQ(unit_directions(1, 3).size(), 2u);
  const auto d = unit_directions(3, 9);
  EXPECT_EQ(d.size(), 14u);
  for (const auto& v : d) EXPECT_NEAR(NormModel::euclidean(3).norm(v), 1.0, 1e-14);
  EXPECT_EQ(d, unit_directions(3, 9));
}

TEST(Psd, Examples) {
  const Window w(kZero, kZero, 0.5, 0.5, kInf);
  const auto q = psd_certify(models::quadratic(1.0, 1), w, 1.0, kPlan, kE1);
  EXPECT_TRUE(q.certified());
  EXPECT_NEAR(q.margin, 0.0, 1e-12);
  EXPECT_TRUE(psd_certify(models::quadratic(1.0, 1), w, 1.2, kPlan, kE1).refuted());
  EXPECT_TRUE(psd_certify(models::huber(0.5, 1), Window(kZero, kZero, 0.8, 0.8, kInf), 0.0, kPlan, kE1).certified());
  const auto st = psd_certify(models::staircase(), Window(kZero, kZero, 0.5, 2.0, kInf), 0.5, kPlan, kE1);
  EXPECT_TRUE(st.refuted());
  EXPECT_TRUE(psd_certify(models::zero_one(), Window(kZero, kZero, 0.5, 0.5, 0.5), 1.0, kPlan, kE1,
                          SecondOrderFlavor::kLimiting).refuted());
  EXPECT_TRUE(psd_certify(oracle::negative_square(), w, 0.0, kPlan, kE1).refuted());
}

TEST(Psd, MarginMatchesCurvature) {
  for (double alpha : {0.5, 2.0})
    for (double sigma : {0.0, 0.25, 1.0}) {
      const auto r = psd_certify(models::quadratic(alpha, 1), Window(kZero, kZero, 0.5, 2.0, kInf), sigma, kPlan, kE1);
      EXPECT_NEAR(r.margin, alpha - sigma, 1e-12);
    }
}

TEST(PointBased, Examples) {
  const auto q = pointbased_check(models::quadratic(1.0, 1), kZero, kPlan);
  EXPECT_TRUE(q.certified());
  EXPECT_NEAR(q.margin, 1.0, 1e-12);
  EXPECT_TRUE(pointbased_check(oracle::negative_square(), kZero, kPlan).refuted());
  EXPECT_TRUE(pointbased_check(models::staircase(), kZero, kPlan).refuted());
  EXPECT_TRUE(pointbased_check(models::abs_value(1), kZero, kPlan).vacuous());
}
