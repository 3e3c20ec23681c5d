#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace massart {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;

// Rejected inputs (bad configuration, violated preconditions).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An environment emitted a point, context or reward that breaks its own promise.
class EnvironmentViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small dense vector helpers.

inline double dot(VectorView a, VectorView b) {
  if (a.size() != b.size()) throw ConfigError("dot: dimension mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm(VectorView a) { return std::sqrt(dot(a, a)); }

inline bool is_zero(VectorView a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
}

// y += alpha * x
inline void axpy(double alpha, VectorView x, std::span<double> y) {
  if (x.size() != y.size()) throw ConfigError("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vector scaled(VectorView x, double alpha) {
  Vector out(x.begin(), x.end());
  for (double& v : out) v *= alpha;
  return out;
}

inline Vector difference(VectorView a, VectorView b) {
  if (a.size() != b.size()) throw ConfigError("difference: dimension mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vector basis_vector(std::size_t d, std::size_t index) {
  Vector e(d, 0.0);
  e.at(index) = 1.0;
  return e;
}

// ---------------------------------------------------------------------------
// Domain types.

/// The learner's hypothesis. Dimension is fixed at construction.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Vector coords) : coords_(std::move(coords)) {}

  static WeightVector zeros(std::size_t d) { return WeightVector(Vector(d, 0.0)); }
  static WeightVector e1(std::size_t d) { return WeightVector(basis_vector(d, 0)); }

  std::size_t dim() const { return coords_.size(); }
  VectorView view() const { return coords_; }
  std::span<double> mutable_view() { return coords_; }
  const Vector& coords() const { return coords_; }
  double norm() const { return massart::norm(coords_); }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  Vector coords_;
};

enum class Label : int { Negative = -1, Positive = 1 };

inline double to_real(Label y) { return static_cast<double>(static_cast<int>(y)); }
inline Label flip(Label y) { return y == Label::Positive ? Label::Negative : Label::Positive; }

struct LabeledRound {
  Vector x;
  Label y = Label::Positive;
};

/// k context vectors, one column per arm.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<Vector> columns) : columns_(std::move(columns)) {
    for (const auto& c : columns_) {
      if (c.size() != columns_.front().size()) throw ConfigError("context: ragged columns");
    }
  }

  std::size_t arms() const { return columns_.size(); }
  std::size_t dim() const { return columns_.empty() ? 0 : columns_.front().size(); }
  VectorView column(std::size_t i) const { return columns_.at(i); }
  const std::vector<Vector>& columns() const { return columns_; }

  // x_i - x_j
  Vector column_difference(std::size_t i, std::size_t j) const {
    return difference(columns_.at(i), columns_.at(j));
  }

 private:
  std::vector<Vector> columns_;
};

using RewardVector = Vector;

// ---------------------------------------------------------------------------
// Randomness. A 64-bit Mersenne Twister with hand-rolled draws so transcripts
// do not depend on the standard library's distribution implementations.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on {0, ..., n-1}, rejection sampled.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw ConfigError("uniform_index: empty range");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<std::size_t>(draw % bound);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; one of the pair is discarded to keep the stream stateless.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double sign() { return bernoulli(0.5) ? 1.0 : -1.0; }

  // Uniform direction on the unit sphere in R^d.
  Vector unit_vector(std::size_t d) {
    Vector v(d);
    double n = 0.0;
    while (n == 0.0) {
      for (double& c : v) c = normal();
      n = massart::norm(v);
    }
    for (double& c : v) c /= n;
    return v;
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

inline Rng seeded_rng(std::uint64_t seed) { return Rng(seed); }

// Independent sub-stream for a named purpose within one run (splitmix64 finalizer).
inline Rng derived_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return Rng(z ^ (z >> 31));
}

// ---------------------------------------------------------------------------
// Parameter schedules.

/// Fixed OGD step D / (G sqrt(T)).
inline double step_size(double diameter, double gradient_bound, long horizon) {
  if (!(diameter > 0.0)) throw ConfigError("step_size: diameter must be positive");
  if (!(gradient_bound > 0.0)) throw ConfigError("step_size: gradient bound must be positive");
  if (horizon < 1) throw ConfigError("step_size: horizon must be at least 1");
  return diameter / (gradient_bound * std::sqrt(static_cast<double>(horizon)));
}

struct HalfspaceParams {
  double epsilon = 0.0;
  double delta_tilde = 0.0;
  double tau = 0.0;
  double step_size = 0.0;
  bool epsilon_clamped = false;
};

inline constexpr double kEpsilonClampMargin = 1e-6;

inline HalfspaceParams derive_halfspace_params(double eta, double gamma, long horizon, double zeta,
                                               double domain_radius = 1.0) {
  if (!(eta >= 0.0) || eta >= 0.5) throw ConfigError("eta must lie in [0, 1/2)");
  if (!(gamma > 0.0) || gamma > 1.0) throw ConfigError("gamma must lie in (0, 1]");
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (!(zeta >= 0.0)) throw ConfigError("zeta must be nonnegative");
  if (!(domain_radius > 0.0)) throw ConfigError("domain_radius must be positive");

  HalfspaceParams p;
  const double raw = std::pow(static_cast<double>(horizon), -1.0 / (4.0 + 2.0 * zeta)) / gamma;
  const double cap = (1.0 - 2.0 * eta) / 2.0 - kEpsilonClampMargin;
  p.epsilon_clamped = raw > cap;
  p.epsilon = std::min(raw, cap);
  p.delta_tilde = 1.0 - 2.0 * eta - p.epsilon;
  p.tau = std::pow(p.epsilon, 1.0 + zeta) * gamma / 4.0;
  // Per-round gradient norm is at most (delta_tilde + 1) / (2 tau) <= 1 / tau on the unit ball.
  p.step_size = massart::step_size(2.0 * domain_radius, 1.0 / p.tau, horizon);
  return p;
}

struct BanditParams {
  double rho = 0.0;
  double lambda_cap = 0.0;
  double q = 0.0;
  double step_size = 0.0;
  bool q_clamped = false;
};

inline BanditParams derive_bandit_params(double gamma, double delta, double reward_cap, long k,
                                         long horizon, double domain_radius = 1.0) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(reward_cap > 0.0)) throw ConfigError("reward_cap must be positive");
  if (k < 2) throw ConfigError("k must be at least 2");
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (!(domain_radius > 0.0)) throw ConfigError("domain_radius must be positive");

  BanditParams p;
  const double kd = static_cast<double>(k);
  p.rho = gamma / 2.0;
  p.lambda_cap = (1.0 / gamma) * std::pow(static_cast<double>(horizon), 1.0 / 6.0) *
                 std::cbrt(reward_cap / (kd * delta));
  const double raw_q = reward_cap / (gamma * p.lambda_cap * delta);
  p.q_clamped = raw_q > 1.0;
  p.q = std::min(1.0, raw_q);
  const double lipschitz =
      (1.0 / p.q) * 2.0 * reward_cap * kd * std::max(p.lambda_cap, 1.0 / p.rho);
  p.step_size = massart::step_size(2.0 * domain_radius, lipschitz, horizon);
  return p;
}

// ---------------------------------------------------------------------------
// Configuration.

enum class AdversaryKind { Iid, Boundary, Adaptive };
enum class EnvironmentKind { Massart2, SortedK, MonotoneK, Reduction2 };

struct HalfspaceConfig {
  std::size_t d = 20;
  long horizon = 10000;
  double eta = 0.1;
  double gamma = 0.2;
  double zeta = 0.0;
  std::uint64_t seed = 0;
  double domain_radius = 1.0;
  AdversaryKind adversary = AdversaryKind::Iid;
  HalfspaceParams derived;

  void validate_and_derive() {
    if (d < 1) throw ConfigError("d must be at least 1");
    derived = derive_halfspace_params(eta, gamma, horizon, zeta, domain_radius);
  }
};

struct BanditConfig {
  std::size_t d = 20;
  std::size_t k = 3;
  long horizon = 10000;
  double gamma = 0.2;
  double delta = 0.5;
  double reward_cap = 1.0;
  double eta = 0.1;  // label noise of the reduction environment only
  std::uint64_t seed = 0;
  double domain_radius = 1.0;
  EnvironmentKind environment = EnvironmentKind::MonotoneK;
  BanditParams derived;

  void validate_and_derive() {
    if (d < 1) throw ConfigError("d must be at least 1");
    derived = derive_bandit_params(gamma, delta, reward_cap, static_cast<long>(k), horizon,
                                   domain_radius);
  }
};

}  // namespace massart
