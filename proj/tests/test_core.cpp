#include <gtest/gtest.h>

#include "massart/core.hpp"
#include "massart/settings.hpp"

namespace massart {
namespace {

TEST(SeededRng, SameSeedSameStream) {
  Rng a = seeded_rng(0), b = seeded_rng(0);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(SeededRng, DifferentSeedsDiffer) {
  Rng a = seeded_rng(0), b = seeded_rng(1);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next_u64() == b.next_u64();
  EXPECT_EQ(same, 0);
}

TEST(SeededRng, DerivedStreamsAreDistinct) {
  Rng a = derived_rng(5, 0), b = derived_rng(5, 1);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(SeededRng, DrawRanges) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.uniform_index(7), 7u);
  }
  EXPECT_NEAR(norm(rng.unit_vector(9)), 1.0, 1e-12);
}

TEST(DeriveHalfspaceParams, ClampedEpsilon) {
  // raw epsilon 10^-1 / 0.2 = 0.5 exceeds (1 - 0.2)/2 = 0.4
  const HalfspaceParams p = derive_halfspace_params(0.1, 0.2, 10000, 0.0);
  EXPECT_TRUE(p.epsilon_clamped);
  EXPECT_NEAR(p.epsilon, 0.399999, 1e-12);
  EXPECT_NEAR(p.delta_tilde, 0.400001, 1e-12);
  EXPECT_NEAR(p.tau, 0.399999 * 0.2 / 4.0, 1e-12);
  EXPECT_NEAR(p.tau, 0.02, 1e-6);
}

TEST(DeriveHalfspaceParams, UnclampedEpsilon) {
  const HalfspaceParams p = derive_halfspace_params(0.25, 0.5, 100000000, 0.0);
  EXPECT_FALSE(p.epsilon_clamped);
  EXPECT_NEAR(p.epsilon, 0.02, 1e-12);
  EXPECT_NEAR(p.delta_tilde, 0.48, 1e-12);
  EXPECT_NEAR(p.tau, 0.0025, 1e-12);
  // D = 2, G = 1/tau = 400, T = 1e8
  EXPECT_NEAR(p.step_size, 2.0 / (400.0 * 1e4), 1e-15);
}

TEST(DeriveHalfspaceParams, NoiselessLimit) {
  const HalfspaceParams p = derive_halfspace_params(0.0, 1.0, 1000000000000L, 0.0);
  EXPECT_LT(p.epsilon, 1e-2);
  EXPECT_GT(p.delta_tilde, 0.99);
  EXPECT_LT(p.tau, 1e-2);
}

TEST(DeriveHalfspaceParams, ZetaShrinksTau) {
  const HalfspaceParams p0 = derive_halfspace_params(0.1, 0.5, 1000000, 0.0);
  const HalfspaceParams p1 = derive_halfspace_params(0.1, 0.5, 1000000, 0.5);
  EXPECT_NEAR(p1.tau, std::pow(p1.epsilon, 1.5) * 0.5 / 4.0, 1e-15);
  EXPECT_LT(p1.tau / p1.epsilon, p0.tau / p0.epsilon);
}

TEST(DeriveHalfspaceParams, Rejections) {
  EXPECT_THROW(derive_halfspace_params(0.5, 0.2, 100, 0.0), ConfigError);
  EXPECT_THROW(derive_halfspace_params(0.1, 0.0, 100, 0.0), ConfigError);
  EXPECT_THROW(derive_halfspace_params(0.1, -0.3, 100, 0.0), ConfigError);
  EXPECT_THROW(derive_halfspace_params(0.1, 0.2, 0, 0.0), ConfigError);
}

TEST(DeriveHalfspaceParams, InvariantsOverRandomConfigs) {
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    const double eta = rng.uniform(0.0, 0.499);
    const double gamma = rng.uniform(1e-3, 1.0);
    const long horizon = 1 + static_cast<long>(std::pow(10.0, rng.uniform(0.0, 9.0)));
    const double zeta = rng.uniform(0.0, 2.0);
    const HalfspaceParams p = derive_halfspace_params(eta, gamma, horizon, zeta);
    ASSERT_GT(p.epsilon, 0.0);
    ASSERT_LT(p.epsilon, (1.0 - 2.0 * eta) / 2.0);
    ASSERT_LE(p.tau, p.epsilon * gamma / 2.0);
    ASSERT_GT(p.delta_tilde, 0.0);
    ASSERT_LT(p.delta_tilde, 1.0);
  }
}

TEST(DeriveBanditParams, ReferenceValues) {
  const BanditParams p = derive_bandit_params(0.2, 0.5, 1.0, 2, 1000000);
  EXPECT_DOUBLE_EQ(p.rho, 0.1);
  EXPECT_NEAR(p.lambda_cap, 50.0, 1e-9);
  EXPECT_NEAR(p.q, 0.2, 1e-12);
  EXPECT_FALSE(p.q_clamped);
  // G = (1/q) 2 M k max(Lambda, 1/rho) = 5 * 4 * 50 = 1000
  EXPECT_NEAR(p.step_size, 2.0 / (1000.0 * 1000.0), 1e-12);
}

TEST(DeriveBanditParams, ExplorationClampsToOne) {
  const BanditParams p = derive_bandit_params(0.01, 0.01, 1.0, 10, 100);
  EXPECT_TRUE(p.q_clamped);
  EXPECT_EQ(p.q, 1.0);
}

TEST(DeriveBanditParams, Rejections) {
  EXPECT_THROW(derive_bandit_params(1.0, 1.0, 1.0, 1, 100), ConfigError);
  EXPECT_THROW(derive_bandit_params(0.0, 1.0, 1.0, 2, 100), ConfigError);
  EXPECT_THROW(derive_bandit_params(0.1, 0.0, 1.0, 2, 100), ConfigError);
  EXPECT_THROW(derive_bandit_params(0.1, 0.5, -1.0, 2, 100), ConfigError);
}

TEST(DeriveBanditParams, InvariantsOverRandomConfigs) {
  Rng rng(12);
  for (int i = 0; i < 5000; ++i) {
    const double gamma = rng.uniform(1e-3, 1.0);
    const BanditParams p = derive_bandit_params(gamma, rng.uniform(1e-3, 1.0), rng.uniform(0.1, 5.0),
                                                2 + static_cast<long>(rng.uniform_index(20)),
                                                1 + static_cast<long>(rng.uniform_index(10000000)));
    ASSERT_EQ(p.rho, gamma / 2.0);
    ASSERT_GT(p.q, 0.0);
    ASSERT_LE(p.q, 1.0);
    ASSERT_GT(p.lambda_cap, 0.0);
  }
}

TEST(StepSize, Values) {
  EXPECT_DOUBLE_EQ(step_size(2.0, 1.0, 100), 0.2);
  EXPECT_DOUBLE_EQ(step_size(2.0, 10.0, 4), 0.1);
  EXPECT_DOUBLE_EQ(step_size(1.0, 1.0, 1), 1.0);
  EXPECT_THROW(step_size(0.0, 1.0, 4), ConfigError);
  EXPECT_THROW(step_size(1.0, -1.0, 4), ConfigError);
}

TEST(Settings, ParsesFlatFile) {
  Settings s;
  apply_settings_text(s,
                      "# experiment\n"
                      "d = 7\n"
                      "t_horizon=500\n"
                      "eta = 0.2   # trailing comment\n"
                      "gamma = 0.3\nzeta = 0.1\nk = 4\ndelta = 0.25\nreward_cap = 2\n"
                      "seed = 9\nadversary = adaptive\nenvironment = sorted_k\ndomain_radius = 1.5\n");
  EXPECT_EQ(s.d, 7u);
  EXPECT_EQ(s.t_horizon, 500);
  EXPECT_DOUBLE_EQ(s.eta, 0.2);
  EXPECT_EQ(s.k, 4u);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.adversary, AdversaryKind::Adaptive);
  EXPECT_EQ(s.environment, EnvironmentKind::SortedK);
  const BanditConfig b = s.bandit();
  EXPECT_DOUBLE_EQ(b.reward_cap, 2.0);
  EXPECT_DOUBLE_EQ(b.domain_radius, 1.5);
  EXPECT_THROW(s.halfspace(), ConfigError);  // sorted_k is not a classification environment
}

TEST(Settings, RejectsBadInput) {
  Settings s;
  EXPECT_THROW(apply_settings_text(s, "unknown = 3\n"), ConfigError);
  EXPECT_THROW(apply_settings_text(s, "d 3\n"), ConfigError);
  EXPECT_THROW(apply_settings_text(s, "eta = abc\n"), ConfigError);
  EXPECT_THROW(apply_settings_text(s, "adversary = sneaky\n"), ConfigError);
  apply_settings_text(s, "eta = 0.6\n");
  EXPECT_THROW(s.halfspace(), ConfigError);
}

}  // namespace
}  // namespace massart
