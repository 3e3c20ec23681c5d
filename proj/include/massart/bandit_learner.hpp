#pragma once

#include <functional>
#include <optional>

#include "massart/core.hpp"
#include "massart/losses.hpp"
#include "massart/optimizer.hpp"

namespace massart {

/// argmax_i w.x_i with ties to the lowest index; uniform when w is exactly zero.
inline std::size_t select_action(VectorView w, const Context& context, Rng& rng) {
  if (context.arms() == 0) throw ConfigError("select_action: empty context");
  if (is_zero(w)) return rng.uniform_index(context.arms());
  std::size_t best = 0;
  double best_score = dot(w, context.column(0));
  for (std::size_t i = 1; i < context.arms(); ++i) {
    const double s = dot(w, context.column(i));
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

/// Debiased full-reward surrogate built from one explored arm.
/// Entry beta is (k-1) r_beta, every other entry is M - r_beta; entries may exceed M.
inline Vector fake_rewards(std::size_t k, double reward_cap, std::size_t beta, double r_beta) {
  if (beta >= k) throw ConfigError("fake_rewards: beta out of range");
  Vector out(k, reward_cap - r_beta);
  out[beta] = static_cast<double>(k - 1) * r_beta;
  return out;
}

/// Two-arm bandit view of a labeled example: contexts (x, -x), rewards ((1+y)/2, (1-y)/2).
inline std::pair<Context, RewardVector> reduce_classification_to_bandit(VectorView x, Label y) {
  const double yr = to_real(y);
  Context ctx({Vector(x.begin(), x.end()), scaled(x, -1.0)});
  return {std::move(ctx), RewardVector{(1.0 + yr) / 2.0, (1.0 - yr) / 2.0}};
}

struct BanditFeedback {
  double observed_reward = 0.0;
  std::size_t played_arm = 0;
  bool explored = false;
  std::optional<std::size_t> explore_arm;
};

struct BanditStep {
  std::size_t alpha = 0;  // exploitation choice
  BanditFeedback feedback;
  double score = 0.0;     // w.x of the played arm before the update
  double loss = 0.0;      // round loss at the pre-update iterate
};

using RewardOracle = std::function<double(std::size_t arm)>;

/// Contextual bandit learner for monotone rewards.
///
/// With probability q a uniformly random arm is explored and the fake reward
/// vector drives a (1/q)-scaled G-loss step; otherwise the argmax arm is played
/// and the iterate stays put.
class BanditLearner {
 public:
  explicit BanditLearner(BanditConfig config) : config_(std::move(config)) {
    config_.validate_and_derive();
    params_ = config_.derived;
    ogd_ = make_ogd_state(WeightVector::e1(config_.d), params_.step_size, config_.domain_radius);
  }

  // Uses the given rho / lambda / q / step instead of the derived schedule.
  BanditLearner(BanditConfig config, const BanditParams& params) : BanditLearner(std::move(config)) {
    if (!(params.rho > 0.0) || !(params.lambda_cap > 0.0)) throw ConfigError("rho and lambda must be positive");
    params_ = params;
    override_exploration(params.q);
    ogd_.step = params.step_size;
  }

  // Pins the exploration probability (q = 0 never explores).
  void override_exploration(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("exploration probability must be in [0, 1]");
    params_.q = q;
  }

  BanditStep round(const Context& context, const RewardOracle& reward_of, Rng& rng) {
    if (round_ >= config_.horizon) throw ConfigError("bandit_round: horizon exceeded");
    if (context.arms() != config_.k || context.dim() != config_.d) {
      throw ConfigError("bandit_round: context shape mismatch");
    }
    const std::size_t k = config_.k;
    BanditStep out;
    out.alpha = select_action(ogd_.w.view(), context, rng);

    Vector subgrad(config_.d, 0.0);
    if (params_.q > 0.0 && rng.bernoulli(params_.q)) {
      const std::size_t beta = rng.uniform_index(k);
      const double r_beta = reward_of(beta);
      const Vector fake = fake_rewards(k, config_.reward_cap, beta, r_beta);
      const GLossParams p{.context = context,
                          .v = ogd_.w.view(),
                          .rewards = fake,
                          .alpha = out.alpha,
                          .delta = config_.delta,
                          .rho = params_.rho,
                          .lambda_cap = params_.lambda_cap};
      LossEval loss = g_loss(ogd_.w.view(), p);
      out.loss = loss.value / params_.q;
      subgrad = scaled(loss.subgrad, 1.0 / params_.q);
      out.feedback = {r_beta, beta, true, beta};
      ++explorations_;
    } else {
      out.feedback = {reward_of(out.alpha), out.alpha, false, std::nullopt};
    }
    out.score = dot(ogd_.w.view(), context.column(out.feedback.played_arm));

    ogd_ = ogd_update(std::move(ogd_), subgrad, out.loss);
    cumulative_reward_ += out.feedback.observed_reward;
    ++round_;
    return out;
  }

  const WeightVector& weights() const { return ogd_.w; }
  const OgdState& ogd() const { return ogd_; }
  const BanditConfig& config() const { return config_; }
  const BanditParams& params() const { return params_; }
  long round_count() const { return round_; }
  long explorations() const { return explorations_; }
  double cumulative_reward() const { return cumulative_reward_; }

 private:
  BanditConfig config_;
  BanditParams params_;
  OgdState ogd_;
  long round_ = 0;
  long explorations_ = 0;
  double cumulative_reward_ = 0.0;
};

}  // namespace massart
