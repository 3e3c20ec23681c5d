#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "massart/bandit_learner.hpp"
#include "massart/core.hpp"
#include "massart/losses.hpp"

namespace massart {

/// Hidden unit target w* plus the promises the adversary is bound by.
struct HiddenTarget {
  Vector w_star;
  double eta = 0.0;         // flip cap
  double gamma = 0.1;       // point margin, or pairwise score gap for contexts
  double delta = 0.0;       // reward margin
  double reward_cap = 1.0;  // M
};

inline HiddenTarget make_target(std::size_t d, Rng& rng, double eta, double gamma,
                                double delta = 0.0, double reward_cap = 1.0) {
  return HiddenTarget{rng.unit_vector(d), eta, gamma, delta, reward_cap};
}

inline constexpr double kAuditTolerance = 1e-12;

namespace detail {

// Removes the w* component of v in place and returns it.
inline double split_along(VectorView unit, std::span<double> v) {
  const double a = dot(unit, v);
  axpy(-a, unit, v);
  return a;
}

// Random vector orthogonal to every (unit, mutually orthogonal) vector in `basis`,
// with norm uniform on [0, max_norm].
inline Vector random_orthogonal(std::size_t d, std::initializer_list<VectorView> basis,
                                double max_norm, Rng& rng) {
  Vector v(d, 0.0);
  if (max_norm <= 0.0 || d <= basis.size()) return v;
  double n = 0.0;
  for (int attempt = 0; attempt < 16 && n < 1e-9; ++attempt) {
    for (double& c : v) c = rng.normal();
    for (VectorView b : basis) split_along(b, v);
    n = norm(v);
  }
  if (n < 1e-9) return Vector(d, 0.0);
  const double target = max_norm * rng.uniform();
  for (double& c : v) c *= target / n;
  return v;
}

inline Vector uniform_in_ball(std::size_t d, Rng& rng) {
  Vector v = rng.unit_vector(d);
  const double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  for (double& c : v) c *= r;
  return v;
}

inline std::vector<std::size_t> score_ranks(const HiddenTarget& target, const Context& context) {
  const std::size_t k = context.arms();
  std::vector<double> scores(k);
  for (std::size_t i = 0; i < k; ++i) scores[i] = dot(target.w_star, context.column(i));
  std::vector<std::size_t> rank(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (scores[j] < scores[i]) ++rank[i];
    }
  }
  return rank;
}

}  // namespace detail

/// Emits a point of the unit ball with |w*.x| >= gamma.
///
/// `Iid` draws uniformly from the ball and resamples the w* component into
/// +-[gamma, 1]. `Boundary` and `Adaptive` use the smallest allowed margin and
/// spend the orthogonal budget on pushing the point onto the learner's current
/// decision boundary.
inline Vector gen_margin_example(AdversaryKind kind, const HiddenTarget& target,
                                 std::optional<VectorView> learner_w, Rng& rng) {
  const double gamma = target.gamma;
  if (!(gamma > 0.0) || gamma > 1.0) throw ConfigError("gen_margin_example: need gamma in (0, 1]");
  const std::size_t d = target.w_star.size();
  const VectorView ws = target.w_star;

  const bool hug = kind != AdversaryKind::Iid && learner_w.has_value() && !is_zero(*learner_w);
  if (!hug) {
    Vector x = detail::uniform_in_ball(d, rng);
    detail::split_along(ws, x);
    const double a = rng.sign() * rng.uniform(gamma, 1.0);
    const double budget = std::sqrt(std::max(0.0, 1.0 - a * a));
    const double n = norm(x);
    if (n > budget) {
      for (double& c : x) c *= budget / n;
    }
    axpy(a, ws, x);
    return x;
  }

  Vector w_perp(learner_w->begin(), learner_w->end());
  const double c = detail::split_along(ws, w_perp);
  const double perp_norm = norm(w_perp);
  const double a = rng.sign() * gamma;
  const double budget = std::sqrt(std::max(0.0, 1.0 - a * a));

  Vector x(d, 0.0);
  if (perp_norm > 1e-9) {
    for (double& v : w_perp) v /= perp_norm;
    const double beta = std::clamp(-a * c / perp_norm, -budget, budget);
    const double rest = std::sqrt(std::max(0.0, budget * budget - beta * beta));
    x = detail::random_orthogonal(d, {ws, VectorView(w_perp)}, rest, rng);
    axpy(beta, w_perp, x);
  } else {
    x = detail::random_orthogonal(d, {ws}, budget, rng);
  }
  // Re-orthogonalise against w* and trim round-off so the ball constraint is exact.
  detail::split_along(ws, x);
  if (const double n = norm(x); n > budget) {
    for (double& v : x) v *= budget / n;
  }
  axpy(a, ws, x);
  return x;
}

/// sign(w*.x), flipped with probability eta_t <= eta.
inline Label massart_label(const HiddenTarget& target, VectorView x, double eta_t, Rng& rng) {
  if (eta_t < 0.0 || eta_t > target.eta) throw ConfigError("massart_label: eta_t exceeds the cap");
  const Label clean = sign_of(dot(target.w_star, x));
  return rng.bernoulli(eta_t) ? flip(clean) : clean;
}

/// Adaptive channel: flips with probability eta only when the learner's
/// prediction would otherwise be correct, so every flip costs a mistake.
inline Label adaptive_massart_label(const HiddenTarget& target, VectorView x, Label prediction,
                                    Rng& rng) {
  const Label clean = sign_of(dot(target.w_star, x));
  const double eta_t = prediction == clean ? target.eta : 0.0;
  return massart_label(target, x, eta_t, rng);
}

/// k columns in the unit ball whose w*-scores are pairwise at least gamma apart.
inline Context gen_context(const HiddenTarget& target, std::size_t k, Rng& rng) {
  if (k < 1) throw ConfigError("gen_context: need at least one arm");
  const double span = static_cast<double>(k - 1) * target.gamma;
  if (span > 2.0) throw ConfigError("gen_context: (k-1) * gamma exceeds 2");
  const std::size_t d = target.w_star.size();
  const double slack = 2.0 - span;

  std::vector<double> offsets(k);
  for (double& o : offsets) o = rng.uniform(0.0, slack);
  std::sort(offsets.begin(), offsets.end());

  std::vector<Vector> columns;
  columns.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = std::clamp(-1.0 + static_cast<double>(i) * target.gamma + offsets[i], -1.0, 1.0);
    Vector x = detail::random_orthogonal(d, {target.w_star}, std::sqrt(1.0 - s * s), rng);
    axpy(s, target.w_star, x);
    columns.push_back(std::move(x));
  }
  rng.shuffle(columns);
  return Context(std::move(columns));
}

/// Noiseless ranking rewards: k uniform draws on [0, M] handed out in score order.
inline RewardVector sample_sorted_rewards(const HiddenTarget& target, const Context& context,
                                          Rng& rng) {
  const std::size_t k = context.arms();
  std::vector<double> draws(k);
  for (double& r : draws) r = rng.uniform(0.0, target.reward_cap);
  std::sort(draws.begin(), draws.end());
  const auto rank = detail::score_ranks(target, context);
  RewardVector r(k);
  for (std::size_t i = 0; i < k; ++i) r[i] = draws[rank[i]];
  return r;
}

/// Largest uniform noise half-width that keeps monotone rewards inside [0, M].
inline double max_monotone_noise(const HiddenTarget& target, std::size_t k) {
  return target.reward_cap / 2.0 - target.delta * static_cast<double>(k - 1) / 2.0;
}

/// Rank-linear base reward M/2 + delta (rank - (k-1)/2) plus uniform noise on +-noise_scale.
inline RewardVector sample_monotone_rewards(const HiddenTarget& target, const Context& context,
                                            double noise_scale, Rng& rng) {
  const std::size_t k = context.arms();
  if (target.delta < 0.0) throw ConfigError("sample_monotone_rewards: negative delta");
  if (target.delta * static_cast<double>(k - 1) > target.reward_cap) {
    throw ConfigError("sample_monotone_rewards: delta * (k-1) exceeds the reward cap");
  }
  if (noise_scale < 0.0 || noise_scale > max_monotone_noise(target, k) + 1e-15) {
    throw ConfigError("sample_monotone_rewards: noise would leave [0, M]");
  }
  const auto rank = detail::score_ranks(target, context);
  const double centre = static_cast<double>(k - 1) / 2.0;
  RewardVector r(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double base =
        target.reward_cap / 2.0 + target.delta * (static_cast<double>(rank[i]) - centre);
    const double noise = noise_scale > 0.0 ? rng.uniform(-noise_scale, noise_scale) : 0.0;
    r[i] = std::clamp(base + noise, 0.0, target.reward_cap);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Independent audits of the promises above. Each throws EnvironmentViolation.

inline void audit_example(const HiddenTarget& target, VectorView x) {
  if (norm(x) > 1.0 + kAuditTolerance) throw EnvironmentViolation("example outside the unit ball");
  if (std::abs(dot(target.w_star, x)) < target.gamma - kAuditTolerance) {
    throw EnvironmentViolation("example violates the margin promise");
  }
}

inline void audit_context(const HiddenTarget& target, const Context& context) {
  for (std::size_t i = 0; i < context.arms(); ++i) {
    if (norm(context.column(i)) > 1.0 + kAuditTolerance) {
      throw EnvironmentViolation("context column outside the unit ball");
    }
    for (std::size_t j = i + 1; j < context.arms(); ++j) {
      const double gap = std::abs(dot(target.w_star, context.column_difference(i, j)));
      if (gap < target.gamma - kAuditTolerance) {
        throw EnvironmentViolation("context violates the score-gap promise");
      }
    }
  }
}

inline void audit_rewards(const HiddenTarget& target, VectorView rewards) {
  for (double r : rewards) {
    if (!(r >= 0.0 && r <= target.reward_cap)) throw EnvironmentViolation("reward outside [0, M]");
  }
}

// ---------------------------------------------------------------------------
// Stateful round generators used by the experiment runner.

/// Classification adversary: picks a point (possibly against the learner's
/// current iterate) and labels it through a Massart channel.
class MassartStream {
 public:
  MassartStream(HiddenTarget target, AdversaryKind kind, std::uint64_t seed)
      : target_(std::move(target)), kind_(kind), rng_(derived_rng(seed, 1)) {}

  Vector next_point(VectorView learner_w) {
    return gen_margin_example(kind_, target_, learner_w, rng_);
  }

  Label label(VectorView x, Label learner_prediction) {
    if (kind_ == AdversaryKind::Adaptive) {
      return adaptive_massart_label(target_, x, learner_prediction, rng_);
    }
    return massart_label(target_, x, target_.eta, rng_);
  }

  const HiddenTarget& target() const { return target_; }

 private:
  HiddenTarget target_;
  AdversaryKind kind_;
  Rng rng_;
};

struct BanditRound {
  Context context;
  RewardVector rewards;  // full vector, hidden from the learner
};

/// Context and reward generator for the bandit experiments.
///
/// `Reduction2` turns a Massart classification stream into a two-arm bandit.
/// Its points carry margin gamma, so the two arm scores differ by at least 2 gamma.
class BanditEnvironment {
 public:
  BanditEnvironment(HiddenTarget target, EnvironmentKind kind, std::size_t k, std::uint64_t seed,
                    std::optional<double> noise_scale = std::nullopt)
      : target_(std::move(target)), kind_(kind), k_(k), rng_(derived_rng(seed, 1)) {
    switch (kind_) {
      case EnvironmentKind::Massart2:
        throw ConfigError("massart2 is a classification environment");
      case EnvironmentKind::Reduction2:
        if (k_ != 2) throw ConfigError("reduction2 requires k = 2");
        if (!(target_.eta >= 0.0 && target_.eta < 0.5)) throw ConfigError("eta must lie in [0, 1/2)");
        if (!(target_.gamma > 0.0) || target_.gamma > 1.0) throw ConfigError("gamma must lie in (0, 1]");
        break;
      case EnvironmentKind::MonotoneK:
        noise_scale_ = noise_scale.value_or(std::max(0.0, max_monotone_noise(target_, k_)));
        [[fallthrough]];
      case EnvironmentKind::SortedK:
        if (static_cast<double>(k_ - 1) * target_.gamma > 2.0) {
          throw ConfigError("(k-1) * gamma exceeds 2");
        }
        break;
    }
    if (kind_ == EnvironmentKind::MonotoneK &&
        target_.delta * static_cast<double>(k_ - 1) > target_.reward_cap) {
      throw ConfigError("delta * (k-1) exceeds the reward cap");
    }
  }

  BanditRound next() {
    switch (kind_) {
      case EnvironmentKind::Reduction2: {
        const Vector x = gen_margin_example(AdversaryKind::Iid, target_, std::nullopt, rng_);
        const Label y = massart_label(target_, x, target_.eta, rng_);
        auto [ctx, r] = reduce_classification_to_bandit(x, y);
        return {std::move(ctx), std::move(r)};
      }
      case EnvironmentKind::SortedK: {
        Context ctx = gen_context(target_, k_, rng_);
        RewardVector r = sample_sorted_rewards(target_, ctx, rng_);
        return {std::move(ctx), std::move(r)};
      }
      case EnvironmentKind::MonotoneK:
      default: {
        Context ctx = gen_context(target_, k_, rng_);
        RewardVector r = sample_monotone_rewards(target_, ctx, noise_scale_, rng_);
        return {std::move(ctx), std::move(r)};
      }
    }
  }

  const HiddenTarget& target() const { return target_; }
  double noise_scale() const { return noise_scale_; }

 private:
  HiddenTarget target_;
  EnvironmentKind kind_;
  std::size_t k_;
  Rng rng_;
  double noise_scale_ = 0.0;
};

}  // namespace massart
