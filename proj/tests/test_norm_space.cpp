#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace varcert;

namespace {

std::vector<Vec> random_vectors(std::size_t n, std::size_t count, std::uint64_t seed, double scale = 3.0) {
  Rng rng(seed);
  std::vector<Vec> out(count, Vec(n));
  for (auto& v : out)
    for (auto& c : v) c = rng.uniform(-scale, scale);
  return out;
}

}  // namespace

TEST(NormSpace, Examples) {
  EXPECT_DOUBLE_EQ(NormModel(2.0, 2).norm(Vec{3.0, 4.0}), 5.0);
  EXPECT_NEAR(NormModel(4.0, 2).norm(Vec{1.0, 1.0}), std::pow(2.0, 0.25), 1e-15);
  for (double p : {1.5, 2.0, 3.0, 4.0}) EXPECT_EQ(NormModel(p, 3).norm(Vec(3, 0.0)), 0.0);
}

TEST(NormSpace, DualityMapExamples) {
  const NormModel e(2.0, 3);
  const Vec x{1.5, -2.0, 0.25};
  EXPECT_EQ(e.duality_map(x), x);
  for (double p : {1.5, 3.0, 4.0}) EXPECT_EQ(NormModel(p, 2).duality_map(Vec{0.0, 0.0}), Vec({0.0, 0.0}));

  const NormModel m4(4.0, 2);
  const Vec j = m4.duality_map(Vec{1.0, 1.0});
  EXPECT_NEAR(j[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(j[1], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(dot(j, Vec{1.0, 1.0}), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::pow(m4.norm(Vec{1.0, 1.0}), 2), std::sqrt(2.0), 1e-12);
}

TEST(NormSpace, InverseDualityExamples) {
  EXPECT_EQ(NormModel(2.0, 2).inverse_duality_map(Vec{0.5, -1.0}), Vec({0.5, -1.0}));
  const Vec back = NormModel(4.0, 2).inverse_duality_map(Vec{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  EXPECT_NEAR(back[0], 1.0, 1e-12);
  EXPECT_NEAR(back[1], 1.0, 1e-12);
  EXPECT_EQ(NormModel(3.0, 2).inverse_duality_map(Vec{0.0, 0.0}), Vec({0.0, 0.0}));
}

TEST(NormSpace, LyapunovExamples) {
  const NormModel m4(4.0, 2);
  EXPECT_NEAR(m4.lyapunov(Vec{1.0, 1.0}, Vec{0.0, 0.0}), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m4.lyapunov(Vec{0.3, -0.7}, Vec{0.3, -0.7}), 0.0, 1e-12);
  const NormModel e(2.0, 2);
  EXPECT_NEAR(e.lyapunov(Vec{1.0, 2.0}, Vec{-1.0, 0.5}), 4.0 + 2.25, 1e-12);
}

TEST(NormSpace, ComponentFormulaMatchesDefinition) {
  for (double p : {1.5, 3.0, 4.0}) {
    const NormModel m(p, 4);
    for (const auto& x : random_vectors(4, 50, 11)) {
      const double nx = oracle::lp_norm(x, p);
      const Vec j = m.duality_map(x);
      for (std::size_t i = 0; i < 4; ++i) {
        const double expect = std::pow(nx, 2.0 - p) * std::pow(std::abs(x[i]), p - 1.0) * (x[i] < 0 ? -1.0 : 1.0);
        EXPECT_NEAR(j[i], expect, 1e-12 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST(NormSpace, WeightedDualityIdentities) {
  const Vec w{0.5, 2.0, 1.0};
  for (double p : {1.5, 2.0, 3.0}) {
    const NormModel m(p, 3, w);
    EXPECT_FALSE(m.is_euclidean());
    for (const auto& x : random_vectors(3, 200, 5)) {
      const Vec j = m.duality_map(x);
      const double nx = m.norm(x);
      EXPECT_NEAR(dot(j, x), nx * nx, 1e-10 * (1 + nx * nx));
      EXPECT_NEAR(m.dual_norm(j), nx, 1e-10 * (1 + nx));
      const Vec back = m.inverse_duality_map(j);
      EXPECT_LE(euclidean_distance(back, x), 1e-10 * (1 + nx));
    }
  }
}

class DualityProperties : public ::testing::TestWithParam<std::tuple<double, std::size_t>> {};

TEST_P(DualityProperties, IdentitiesRoundTripAndMonotonicity) {
  const auto [p, n] = GetParam();
  const NormModel m(p, n);
  const auto xs = random_vectors(n, 10000, 1234 + n);
  const auto ys = random_vectors(n, 10000, 4321 + n);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Vec& x = xs[k];
    const Vec& y = ys[k];
    const Vec jx = m.duality_map(x);
    const double nx = m.norm(x);
    ASSERT_LE(std::abs(dot(jx, x) - nx * nx), 1e-10 * (1 + nx * nx));
    ASSERT_LE(std::abs(m.dual_norm(jx) - nx), 1e-10 * (1 + nx));
    ASSERT_LE(euclidean_distance(m.inverse_duality_map(jx), x), 1e-10 * (1 + nx));
    ASSERT_GE(m.lyapunov(x, y), -1e-12);
    ASSERT_LE(std::abs(m.lyapunov(x, x)), 1e-12 * (1 + nx * nx));
    ASSERT_GE(dot(sub(jx, m.duality_map(y)), sub(x, y)), -1e-12);
    if (p == 2.0) {
      ASSERT_LE(std::abs(m.lyapunov(x, y) - m.squared_distance(x, y)), 1e-10);
      ASSERT_EQ(m.lyapunov(x, y), m.squared_distance(x, y));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, DualityProperties,
                         ::testing::Combine(::testing::Values(1.5, 2.0, 3.0, 4.0),
                                            ::testing::Values(std::size_t{1}, std::size_t{2}, std::size_t{5})));

TEST(NormSpace, RejectsBadExponentsAndWeights) {
  EXPECT_THROW(NormModel(1.0, 2), InputError);
  EXPECT_THROW(NormModel(std::numeric_limits<double>::infinity(), 2), InputError);
  EXPECT_THROW(NormModel(0.5, 2), InputError);
  EXPECT_THROW(NormModel(2.0, 2, Vec{1.0, 0.0}), InputError);
  EXPECT_THROW(NormModel(2.0, 2, Vec{1.0}), InputError);
  EXPECT_THROW(NormModel(2.0, 2).norm(Vec{1.0}), InputError);
}

TEST(NormSpace, StrongMonoModulusEuclideanIsOne) {
  const SamplePlan plan(3, 2, 500, Box::cube(2, -1.0, 1.0));
  const ModulusEstimate e = estimate_strong_mono_modulus(NormModel(2.0, 2), plan);
  EXPECT_GE(e.pairs, 100u);
  EXPECT_NEAR(e.value, 1.0, 1e-12);
}

TEST(NormSpace, StrongMonoModulusMatchesBruteForce) {
  for (double p : {1.5, 4.0}) {
    const NormModel m(p, 2);
    const SamplePlan plan(9, 2, 1000, Box::cube(2, -1.0, 1.0));
    const ModulusEstimate e = estimate_strong_mono_modulus(m, plan);
    ASSERT_EQ(e.argmin_x.size(), 2u);
    const Vec d = sub(e.argmin_x, e.argmin_y);
    const double ratio = dot(sub(m.duality_map(e.argmin_x), m.duality_map(e.argmin_y)), d) / std::pow(m.norm(d), 2);
    EXPECT_NEAR(ratio, e.value, 1e-12);
    EXPECT_GT(e.value, 0.0);
    if (p == 1.5) EXPECT_LE(e.value, 1.0 + 1e-12);
    EXPECT_EQ(estimate_strong_mono_modulus(m, plan).value, e.value);
  }
}

TEST(NormSpace, JsonRoundTrip) {
  const NormModel m(3.0, 2, Vec{1.0, 2.0});
  nlohmann::json j;
  to_json(j, m);
  EXPECT_EQ(j.at("p"), 3.0);
  EXPECT_EQ(j.at("n"), 2);
  const NormModel back = norm_model_from_json(j);
  EXPECT_EQ(back.weights(), m.weights());
  EXPECT_EQ(back.norm(Vec{1.0, -1.0}), m.norm(Vec{1.0, -1.0}));
}
