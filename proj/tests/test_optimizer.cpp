#include <gtest/gtest.h>

#include "massart/harness.hpp"
#include "massart/optimizer.hpp"

namespace massart {
namespace {

TEST(ProjectBall, Values) {
  const Vector p = project_ball(Vector{3.0, 4.0}, 1.0);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  EXPECT_EQ(project_ball(Vector{0.1, -0.2}, 1.0), (Vector{0.1, -0.2}));
  EXPECT_EQ(project_ball(Vector{0.0, 0.0}, 1.0), (Vector{0.0, 0.0}));
  EXPECT_THROW(project_ball(Vector{1.0}, 0.0), ConfigError);
}

TEST(ProjectBall, IdempotentAndClosest) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    Vector w(4);
    for (double& c : w) c = 3.0 * rng.normal();
    const double radius = rng.uniform(0.1, 2.0);
    const Vector p = project_ball(w, radius);
    ASSERT_LE(norm(p), radius * (1.0 + 1e-15));
    const Vector again = project_ball(p, radius);
    for (std::size_t c = 0; c < 4; ++c) ASSERT_NEAR(again[c], p[c], 1e-15 * radius);
    // no feasible sample point is closer
    for (int s = 0; s < 10; ++s) {
      Vector q = rng.unit_vector(4);
      for (double& c : q) c *= radius * rng.uniform();
      ASSERT_GE(norm(difference(w, q)) + 1e-12, norm(difference(w, p)));
    }
  }
}

TEST(OgdUpdate, StepWithoutProjection) {
  OgdState s = make_ogd_state(WeightVector::zeros(2), 0.5);
  s = ogd_update(s, Vector{1.0, 0.0});
  EXPECT_EQ(s.w.coords(), (Vector{-0.5, 0.0}));
  EXPECT_EQ(s.round, 1);
}

TEST(OgdUpdate, ZeroGradientKeepsIterate) {
  OgdState s = make_ogd_state(WeightVector(Vector{0.3, -0.2}), 0.5);
  const OgdState next = ogd_update(s, Vector{0.0, 0.0}, 1.25);
  EXPECT_EQ(next.w, s.w);
  EXPECT_EQ(next.round, 1);
  EXPECT_DOUBLE_EQ(next.cumulative_loss, 1.25);
}

TEST(OgdUpdate, ProjectionFires) {
  OgdState s = make_ogd_state(WeightVector::e1(2), 1.0, 1.0);
  s = ogd_update(s, Vector{-2.0, 0.0});
  EXPECT_EQ(s.w.coords(), (Vector{1.0, 0.0}));
}

TEST(OgdUpdate, DimensionMismatch) {
  OgdState s = make_ogd_state(WeightVector::e1(2), 1.0);
  EXPECT_THROW(ogd_update(s, Vector{1.0}), ConfigError);
}

TEST(OgdUpdate, IteratesStayFeasible) {
  Rng rng(2);
  OgdState s = make_ogd_state(WeightVector::e1(6), 0.9, 0.7);
  for (int t = 0; t < 20000; ++t) {
    Vector g(6);
    for (double& c : g) c = 4.0 * rng.normal();
    s = ogd_update(std::move(s), g);
    ASSERT_LE(s.w.norm(), 0.7 + 1e-12);
    ASSERT_EQ(s.round, t + 1);
  }
}

// |w_1 - 1/2| on the unit ball: G = 1, D = 2.
TEST(OgdRegret, SublinearWithStandardConstant) {
  std::vector<double> horizons{1e3, 1e4, 1e5}, regrets;
  for (double t : horizons) {
    const double r = detail::ogd_abs_regret(static_cast<long>(t));
    EXPECT_LE(r, 1.5 * 1.0 * 2.0 * std::sqrt(t));
    regrets.push_back(r);
  }
  EXPECT_LE(loglog_slope(horizons, regrets), 0.6);
}

}  // namespace
}  // namespace massart
