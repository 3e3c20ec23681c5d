#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "massart/bandit_learner.hpp"
#include "massart/core.hpp"
#include "massart/environments.hpp"
#include "massart/halfspace_learner.hpp"
#include "massart/losses.hpp"
#include "massart/optimizer.hpp"

namespace massart {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Per-round trace.

struct RoundRecord {
  long round = 0;
  double action = 0.0;      // predicted label, or played arm
  double observed = 0.0;    // revealed label, or observed reward
  double score = 0.0;       // w.x of the prediction / played arm
  double loss = 0.0;
  bool explored = false;
  double cum_metric = 0.0;  // cumulative mistakes, or cumulative reward
  double w_norm = 0.0;
};

inline constexpr const char* kCsvHeader = "round,action,observed,score,loss,explored,cum_metric,w_norm";

// Shortest round-trip decimal form; locale independent.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline void write_csv(std::ostream& out, const std::vector<RoundRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.round << ',' << format_number(r.action) << ',' << format_number(r.observed) << ','
        << format_number(r.score) << ',' << format_number(r.loss) << ',' << (r.explored ? 1 : 0)
        << ',' << format_number(r.cum_metric) << ',' << format_number(r.w_norm) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Baselines.

/// Classic mistake-driven perceptron started at zero; sign(0) predicts +1.
inline long perceptron_baseline(const std::vector<LabeledRound>& stream) {
  if (stream.empty()) return 0;
  Vector w(stream.front().x.size(), 0.0);
  long mistakes = 0;
  for (const auto& [x, y] : stream) {
    if (sign_of(dot(w, x)) != y) {
      ++mistakes;
      axpy(to_real(y), x, w);
    }
  }
  return mistakes;
}

inline long random_play_baseline(const std::vector<LabeledRound>& stream, Rng& rng) {
  long mistakes = 0;
  for (const auto& round : stream) {
    const Label guess = rng.bernoulli(0.5) ? Label::Positive : Label::Negative;
    if (guess != round.y) ++mistakes;
  }
  return mistakes;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ConfigError("loglog_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]) / n;
    my += std::log(ys[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Halfspace experiment.

struct HalfspaceRun {
  HalfspaceConfig config;
  long mistakes = 0;
  long random_play_mistakes = 0;
  long perceptron_mistakes = 0;
  Vector final_w;
  std::vector<RoundRecord> records;  // empty unless requested
  double wall_time = 0.0;

  double mistake_rate() const { return static_cast<double>(mistakes) / config.horizon; }
  double eta_t() const { return config.eta * static_cast<double>(config.horizon); }
  double excess_scale() const { return std::pow(static_cast<double>(config.horizon), 0.75) / config.gamma; }
  // (M(T) - eta T) gamma / T^{3/4}
  double normalized_excess() const { return (static_cast<double>(mistakes) - eta_t()) / excess_scale(); }
};

inline HalfspaceRun run_halfspace_experiment(HalfspaceConfig config, bool keep_records = false) {
  const auto start = std::chrono::steady_clock::now();
  config.validate_and_derive();

  Rng target_rng = derived_rng(config.seed, 0);
  HiddenTarget target = make_target(config.d, target_rng, config.eta, config.gamma);
  MassartStream adversary(target, config.adversary, config.seed);
  HalfspaceLearner learner(config);

  HalfspaceRun run;
  run.config = learner.config();
  std::vector<LabeledRound> stream;
  stream.reserve(static_cast<std::size_t>(config.horizon));
  if (keep_records) run.records.reserve(static_cast<std::size_t>(config.horizon));

  for (long t = 0; t < config.horizon; ++t) {
    Vector x = adversary.next_point(learner.weights().view());
    audit_example(target, x);
    const Label prediction = learner.predict(x);
    const Label y = adversary.label(x, prediction);
    const HalfspaceStep step = learner.observe(x, y);
    if (keep_records) {
      run.records.push_back({t + 1, to_real(step.prediction), to_real(y), step.score, step.loss,
                             false, static_cast<double>(learner.mistakes()),
                             learner.weights().norm()});
    }
    stream.push_back({std::move(x), y});
  }

  run.mistakes = learner.mistakes();
  run.final_w = learner.weights().coords();
  Rng coin = derived_rng(config.seed, 2);
  run.random_play_mistakes = random_play_baseline(stream, coin);
  run.perceptron_mistakes = perceptron_baseline(stream);
  run.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

// ---------------------------------------------------------------------------
// Bandit experiment.

struct BanditRunOptions {
  std::optional<double> env_delta;    // reward margin of the environment, defaults to config.delta
  std::optional<double> noise_scale;  // monotone reward noise, defaults to the largest feasible
};

struct BanditRun {
  BanditConfig config;
  double reward = 0.0;
  double uniform_arm_mean = 0.0;  // sum_t (1/k) sum_i r_i
  double random_play_reward = 0.0;
  long explorations = 0;
  Vector final_w;
  std::vector<RoundRecord> records;
  double wall_time = 0.0;

  double gain() const { return reward - uniform_arm_mean; }
  double target_gain() const {
    const double k = static_cast<double>(config.k);
    return (1.0 - 1.0 / k) * config.delta * static_cast<double>(config.horizon);
  }
  // T^{5/6} (k Delta M^2)^{1/3} / gamma
  double bound_term() const {
    return std::pow(static_cast<double>(config.horizon), 5.0 / 6.0) *
           std::cbrt(static_cast<double>(config.k) * config.delta * config.reward_cap *
                     config.reward_cap) /
           config.gamma;
  }
  double implied_mistake_rate() const { return 1.0 - reward / static_cast<double>(config.horizon); }
};

inline BanditRun run_bandit_experiment(BanditConfig config, bool keep_records = false,
                                       const BanditRunOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  config.validate_and_derive();

  Rng target_rng = derived_rng(config.seed, 0);
  HiddenTarget target = make_target(config.d, target_rng, config.eta, config.gamma,
                                    options.env_delta.value_or(config.delta), config.reward_cap);
  BanditEnvironment env(target, config.environment, config.k, config.seed, options.noise_scale);
  BanditLearner learner(config);
  Rng learner_rng = derived_rng(config.seed, 2);
  Rng coin = derived_rng(config.seed, 3);

  BanditRun run;
  run.config = learner.config();
  if (keep_records) run.records.reserve(static_cast<std::size_t>(config.horizon));
  const double k = static_cast<double>(config.k);

  for (long t = 0; t < config.horizon; ++t) {
    BanditRound round = env.next();
    audit_context(target, round.context);
    audit_rewards(target, round.rewards);
    const RewardVector& r = round.rewards;
    const BanditStep step = learner.round(
        round.context, [&r](std::size_t arm) { return r.at(arm); }, learner_rng);
    for (double v : r) run.uniform_arm_mean += v / k;
    run.random_play_reward += r[coin.uniform_index(config.k)];
    if (keep_records) {
      run.records.push_back({t + 1, static_cast<double>(step.feedback.played_arm),
                             step.feedback.observed_reward, step.score, step.loss,
                             step.feedback.explored, learner.cumulative_reward(),
                             learner.weights().norm()});
    }
  }

  run.reward = learner.cumulative_reward();
  run.explorations = learner.explorations();
  run.final_w = learner.weights().coords();
  run.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

// ---------------------------------------------------------------------------
// Multi-seed fan-out. Results are returned in seed order regardless of scheduling.

template <typename Result>
std::vector<Result> run_seeds(std::uint64_t first_seed, std::size_t count,
                              const std::function<Result(std::uint64_t)>& run_one) {
  std::vector<Result> results(count);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = run_one(first_seed + i);
    return results;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) results[i] = run_one(first_seed + i);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

// ---------------------------------------------------------------------------
// Reports.

inline const char* adversary_name(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::Iid: return "iid";
    case AdversaryKind::Boundary: return "boundary";
    case AdversaryKind::Adaptive: return "adaptive";
  }
  return "iid";
}

inline const char* environment_name(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::Massart2: return "massart2";
    case EnvironmentKind::SortedK: return "sorted_k";
    case EnvironmentKind::MonotoneK: return "monotone_k";
    case EnvironmentKind::Reduction2: return "reduction2";
  }
  return "monotone_k";
}

inline Json config_json(const HalfspaceConfig& c) {
  return Json{{"d", c.d},
              {"t_horizon", c.horizon},
              {"eta", c.eta},
              {"gamma", c.gamma},
              {"zeta", c.zeta},
              {"seed", c.seed},
              {"adversary", adversary_name(c.adversary)},
              {"environment", "massart2"},
              {"domain_radius", c.domain_radius},
              {"derived",
               {{"epsilon", c.derived.epsilon},
                {"delta_tilde", c.derived.delta_tilde},
                {"tau", c.derived.tau},
                {"step_size", c.derived.step_size}}}};
}

inline Json config_json(const BanditConfig& c) {
  return Json{{"d", c.d},
              {"k", c.k},
              {"t_horizon", c.horizon},
              {"gamma", c.gamma},
              {"delta", c.delta},
              {"reward_cap", c.reward_cap},
              {"eta", c.eta},
              {"seed", c.seed},
              {"environment", environment_name(c.environment)},
              {"domain_radius", c.domain_radius},
              {"derived",
               {{"rho", c.derived.rho},
                {"lambda_cap", c.derived.lambda_cap},
                {"q", c.derived.q},
                {"step_size", c.derived.step_size}}}};
}

inline Json report_json(const HalfspaceRun& run, bool include_wall_time = true) {
  Json j{{"config", config_json(run.config)},
         {"total_mistakes", run.mistakes},
         {"mistake_rate", run.mistake_rate()},
         {"baselines",
          {{"random_play", run.random_play_mistakes},
           {"uniform_arm_mean", nullptr},
           {"perceptron", run.perceptron_mistakes}}},
         {"bound_check",
          {{"eta_T", run.eta_t()},
           {"T34_over_gamma", run.excess_scale()},
           {"normalized_excess", run.normalized_excess()}}},
         {"clamp_flags", {{"epsilon_clamped", run.config.derived.epsilon_clamped}}}};
  if (include_wall_time) j["wall_time"] = run.wall_time;
  return j;
}

inline Json report_json(const BanditRun& run, bool include_wall_time = true) {
  Json j{{"config", config_json(run.config)},
         {"total_reward", run.reward},
         {"explorations", run.explorations},
         {"baselines",
          {{"random_play", run.random_play_reward},
           {"uniform_arm_mean", run.uniform_arm_mean},
           {"perceptron", nullptr}}},
         {"bound_check",
          {{"gain_vs_uniform", run.gain()},
           {"k1k_delta_T", run.target_gain()},
           {"T56_term", run.bound_term()},
           {"implied_mistake_rate", run.implied_mistake_rate()}}},
         {"clamp_flags", {{"q_clamped", run.config.derived.q_clamped}}}};
  if (include_wall_time) j["wall_time"] = run.wall_time;
  return j;
}

// ---------------------------------------------------------------------------
// Oracle verification.

struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  Json to_json() const {
    Json arr = Json::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return Json{{"passed", all_passed()}, {"checks", arr}};
  }
};

using FakeRewardFn = std::function<Vector(std::size_t k, double M, std::size_t beta, double r_beta)>;

struct OracleOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 10000;  // pairs per convexity / subgradient / Lipschitz check
  std::size_t leaky_samples = 100000;
  std::size_t debias_instances = 1000;
  std::optional<double> tau;  // overrides the derived tau in the reweighted-loss checks
  FakeRewardFn fake_rewards = [](std::size_t k, double m, std::size_t b, double r) {
    return massart::fake_rewards(k, m, b, r);
  };
};

namespace detail {

inline Vector random_in_ball(std::size_t d, Rng& rng, double radius = 1.0) {
  Vector v = uniform_in_ball(d, rng);
  for (double& c : v) c *= radius;
  return v;
}

inline Context random_context(std::size_t d, std::size_t k, Rng& rng) {
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < k; ++i) cols.push_back(random_in_ball(d, rng));
  return Context(std::move(cols));
}

inline Vector random_rewards(std::size_t k, double m, Rng& rng) {
  Vector r(k);
  for (double& v : r) v = rng.uniform(0.0, m);
  return r;
}

// Cumulative OGD regret on l_t(w) = |w_1 - 0.5| over the unit ball of R^2, started at e_1.
inline double ogd_abs_regret(long horizon) {
  const double step = step_size(2.0, 1.0, horizon);
  OgdState s = make_ogd_state(WeightVector::e1(2), step, 1.0);
  double regret = 0.0;  // the best fixed point has zero loss
  for (long t = 0; t < horizon; ++t) {
    const double u = s.w[0] - 0.5;
    regret += std::abs(u);
    const Vector g{u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0), 0.0};
    s = ogd_update(std::move(s), g, std::abs(u));
  }
  return regret;
}

}  // namespace detail

inline OracleReport verify_oracles(const HalfspaceConfig& hcfg, const BanditConfig& bcfg,
                                   const OracleOptions& opt = {}) {
  OracleReport report;
  Rng rng = derived_rng(opt.seed, 7);
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, false, std::string("precondition error: ") + e.what());
    }
  };

  // Two forms of the leaky ReLU.
  guarded("leaky_relu_equivalence", [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.leaky_samples; ++i) {
      const double lambda = rng.uniform();
      const double t = rng.sign() * std::pow(10.0, rng.uniform(-6.0, 6.0));
      const double a = leaky_relu(lambda, t);
      const double b = leaky_relu_abs_form(lambda, t);
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
    add("leaky_relu_equivalence", worst <= 1e-12, "max relative error " + format_number(worst));
  });

  guarded("c_delta_affine_in_label", [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const double delta = rng.uniform(), t = rng.uniform(-2.0, 2.0);
      const double y1 = rng.uniform(-2.0, 2.0), y2 = rng.uniform(-2.0, 2.0);
      const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      const double lhs = c_delta(delta, t, a * y1 + b * y2);
      const double rhs = a * c_delta(delta, t, y1) + b * c_delta(delta, t, y2) +
                         (1.0 - a - b) * 0.5 * delta * std::abs(t);
      worst = std::max(worst, std::abs(lhs - rhs));
      if (i % 2 == 0) {
        const double y = rng.sign();
        worst = std::max(worst, std::abs(c_delta(delta, t, y) - leaky_relu((1.0 - delta) / 2.0, -t * y)));
      }
    }
    add("c_delta_affine_in_label", worst <= 1e-12, "max abs error " + format_number(worst));
  });

  // Convexity via subgradient inequality and midpoints, for all three losses.
  const std::size_t d = std::max<std::size_t>(2, std::min<std::size_t>(hcfg.d, 8));
  const std::size_t k = std::max<std::size_t>(2, std::min<std::size_t>(bcfg.k, 6));
  const double tau = opt.tau.value_or(hcfg.derived.tau);
  const double m = bcfg.reward_cap;
  struct Instance {
    std::function<LossEval(VectorView)> loss;
  };
  auto convexity = [&](const std::string& name, const std::function<Instance()>& make) {
    guarded(name, [&] {
      double worst_sub = 0.0, worst_mid = 0.0;
      for (std::size_t i = 0; i < opt.samples; ++i) {
        const Instance inst = make();
        const Vector w = detail::random_in_ball(d, rng), u = detail::random_in_ball(d, rng);
        const LossEval at_w = inst.loss(w);
        const LossEval at_u = inst.loss(u);
        const double lower = at_w.value + dot(at_w.subgrad, difference(u, w));
        worst_sub = std::max(worst_sub, lower - at_u.value);
        Vector mid(d);
        for (std::size_t c = 0; c < d; ++c) mid[c] = 0.5 * (w[c] + u[c]);
        worst_mid = std::max(worst_mid, inst.loss(mid).value - 0.5 * (at_w.value + at_u.value));
      }
      add(name, worst_sub <= 1e-9 && worst_mid <= 1e-9,
          "subgradient slack " + format_number(worst_sub) + ", midpoint slack " + format_number(worst_mid));
    });
  };

  convexity("reweighted_loss_convex", [&] {
    auto x = std::make_shared<Vector>(detail::random_in_ball(d, rng));
    auto ref = std::make_shared<Vector>(detail::random_in_ball(d, rng));
    const Label y = rng.bernoulli(0.5) ? Label::Positive : Label::Negative;
    const double dt = hcfg.derived.delta_tilde;
    return Instance{[=](VectorView w) { return reweighted_loss(w, *x, y, *ref, tau, dt); }};
  });

  auto g_instance = [&](bool zero_ref) {
    auto ctx = std::make_shared<Context>(detail::random_context(d, k, rng));
    auto v = std::make_shared<Vector>(zero_ref ? Vector(d, 0.0) : rng.unit_vector(d));
    auto r = std::make_shared<Vector>(detail::random_rewards(k, m, rng));
    const std::size_t alpha = rng.uniform_index(k);
    const double delta = rng.uniform(), rho = bcfg.derived.rho, lam = bcfg.derived.lambda_cap;
    return Instance{[=](VectorView w) {
      return g_loss(w, GLossParams{*ctx, *v, *r, alpha, delta, rho, lam});
    }};
  };
  convexity("g_loss_zero_branch_convex", [&] { return g_instance(true); });
  convexity("g_loss_main_branch_convex", [&] { return g_instance(false); });

  auto lipschitz = [&](const std::string& name, bool zero_ref) {
    guarded(name, [&] {
      const double bound = g_loss_lipschitz(m, k, bcfg.derived.lambda_cap, bcfg.derived.rho);
      double worst = 0.0;
      for (std::size_t i = 0; i < opt.samples; ++i) {
        const Instance inst = g_instance(zero_ref);
        const Vector w1 = detail::random_in_ball(d, rng), w2 = detail::random_in_ball(d, rng);
        const double gap = std::abs(inst.loss(w1).value - inst.loss(w2).value);
        worst = std::max(worst, gap - bound * norm(difference(w1, w2)));
      }
      add(name, worst <= 1e-9, "max excess over bound " + format_number(worst));
    });
  };
  lipschitz("g_loss_zero_branch_lipschitz", true);
  lipschitz("g_loss_main_branch_lipschitz", false);

  guarded("z_sign_preservation", [&] {
    long failures = 0;
    const double gamma = bcfg.gamma;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      HiddenTarget target = make_target(d, rng, 0.0, gamma);
      const Context ctx = gen_context(target, k, rng);
      const Vector v = rng.unit_vector(d);
      const std::size_t alpha = rng.uniform_index(k);
      for (std::size_t j = 0; j < k; ++j) {
        if (j == alpha) continue;
        const Vector z = perturbed_difference(ctx, alpha, j, v, gamma / 2.0);
        const double raw = dot(target.w_star, ctx.column_difference(alpha, j));
        if (sign_of(dot(target.w_star, z)) != sign_of(raw)) ++failures;
      }
    }
    add("z_sign_preservation", failures == 0, std::to_string(failures) + " sign flips");
  });

  guarded("target_negative_loss", [&] {
    double worst = -1.0;
    const double eta = hcfg.eta;
    const double eps = hcfg.derived.epsilon;
    const double delta_tilde = (1.0 - 2.0 * eta) - eps;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const Vector w_star = rng.unit_vector(d);
      const Vector x = detail::random_in_ball(d, rng);
      const double eta_t = rng.uniform(0.0, eta);
      const double s = dot(w_star, x);
      const double clean = to_real(sign_of(s));
      const double expected = (1.0 - eta_t) * c_delta(delta_tilde, s, clean) +
                              eta_t * c_delta(delta_tilde, s, -clean);
      worst = std::max(worst, expected + 0.5 * eps * std::abs(s));
    }
    add("target_negative_loss", worst <= 1e-12, "max slack " + format_number(worst));
  });

  guarded("fake_reward_debiasing", [&] {
    double worst_loss = 0.0, worst_diff = 0.0;
    for (std::size_t i = 0; i < opt.debias_instances; ++i) {
      const std::size_t di = 1 + rng.uniform_index(8), ki = 2 + rng.uniform_index(5);
      const Context ctx = detail::random_context(di, ki, rng);
      const Vector r = detail::random_rewards(ki, m, rng);
      const Vector v = rng.bernoulli(0.2) ? Vector(di, 0.0) : detail::random_in_ball(di, rng);
      const Vector w = detail::random_in_ball(di, rng);
      const std::size_t alpha = rng.uniform_index(ki);
      const double delta = rng.uniform(), rho = 0.1, lam = 3.0, q = rng.uniform(0.05, 1.0);
      double avg = 0.0;
      Vector avg_fake(ki, 0.0);
      for (std::size_t beta = 0; beta < ki; ++beta) {
        const Vector fake = opt.fake_rewards(ki, m, beta, r[beta]);
        avg += g_loss(w, GLossParams{ctx, v, fake, alpha, delta, rho, lam}).value / ki;
        for (std::size_t j = 0; j < ki; ++j) avg_fake[j] += (fake[alpha] - fake[j]) / ki;
      }
      const double with_coin = q * (avg / q) + (1.0 - q) * 0.0;
      const double exact = g_loss(w, GLossParams{ctx, v, r, alpha, delta, rho, lam}).value;
      worst_loss = std::max(worst_loss, std::abs(with_coin - exact));
      for (std::size_t j = 0; j < ki; ++j) {
        worst_diff = std::max(worst_diff, std::abs(avg_fake[j] - (r[alpha] - r[j])));
      }
    }
    add("fake_reward_debiasing", worst_loss <= 1e-9 && worst_diff <= 1e-9,
        "loss error " + format_number(worst_loss) + ", difference error " + format_number(worst_diff));
  });

  guarded("ogd_regret_sanity", [&] {
    const std::vector<double> horizons{1e3, 1e4, 1e5};
    std::vector<double> regrets;
    bool within = true;
    for (double t : horizons) {
      const double reg = detail::ogd_abs_regret(static_cast<long>(t));
      regrets.push_back(std::max(reg, 1e-12));
      within = within && reg <= 1.5 * 1.0 * 2.0 * std::sqrt(t);
    }
    const double slope = loglog_slope(horizons, regrets);
    add("ogd_regret_sanity", within && slope <= 0.6,
        "slope " + format_number(slope) + ", regret@1e5 " + format_number(regrets.back()));
  });

  guarded("ogd_feasibility", [&] {
    OgdState s = make_ogd_state(WeightVector::e1(d), 0.7, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      Vector g = detail::random_in_ball(d, rng, 5.0);
      s = ogd_update(std::move(s), g);
      worst = std::max(worst, s.w.norm() - 1.0);
    }
    add("ogd_feasibility", worst <= 1e-12, "max norm excess " + format_number(worst));
  });

  guarded("exploration_frequency", [&] {
    BanditConfig cfg = bcfg;
    cfg.horizon = 10000;
    BanditLearner learner(cfg);
    HiddenTarget target = make_target(cfg.d, rng, 0.0, cfg.gamma, 0.0, cfg.reward_cap);
    for (long t = 0; t < cfg.horizon; ++t) {
      const Context ctx = gen_context(target, cfg.k, rng);
      learner.round(ctx, [](std::size_t) { return 0.5; }, rng);
    }
    const double q = learner.params().q;
    const double n = static_cast<double>(cfg.horizon);
    const double sigma = std::sqrt(q * (1.0 - q) / n);
    const double rate = static_cast<double>(learner.explorations()) / n;
    add("exploration_frequency", std::abs(rate - q) <= 3.0 * sigma + 1e-12,
        "rate " + format_number(rate) + " vs q " + format_number(q));
  });

  guarded("argmax_scale_invariance", [&] {
    long failures = 0;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const Context ctx = detail::random_context(d, k, rng);
      const Vector w = detail::random_in_ball(d, rng);
      const double c = std::pow(10.0, rng.uniform(-3.0, 3.0));
      Rng r1(1), r2(1);
      if (select_action(w, ctx, r1) != select_action(scaled(w, c), ctx, r2)) ++failures;
    }
    add("argmax_scale_invariance", failures == 0, std::to_string(failures) + " mismatches");
  });

  return report;
}

}  // namespace massart
