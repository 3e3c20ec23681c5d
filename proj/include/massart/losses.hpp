#pragma once

#include <cmath>
#include <cstddef>

#include "massart/core.hpp"

namespace massart {

/// Value of a convex loss at a point together with one subgradient there.
struct LossEval {
  double value = 0.0;
  Vector subgrad;
};

/// Prediction sign with sign(0) = +1.
inline Label sign_of(double t) { return t >= 0.0 ? Label::Positive : Label::Negative; }

inline double leaky_relu(double lambda, double t) {
  if (t > 0.0) return (1.0 - lambda) * t;
  if (t < 0.0) return lambda * t;
  return 0.0;
}

// The |t| form of the same function; kept separate for equivalence checks.
inline double leaky_relu_abs_form(double lambda, double t) {
  return 0.5 * ((1.0 - 2.0 * lambda) * std::abs(t) + t);
}

/// C_delta(t; y) = (delta |t| - y t) / 2. y may be any real (reward differences included).
inline double c_delta(double delta, double t, double y) {
  return 0.5 * (delta * std::abs(t) - y * t);
}

// d/dt of c_delta; at the kink t = 0 the subgradient -y/2 is used.
inline double c_delta_subgrad(double delta, double t, double y) {
  const double s = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
  return 0.5 * (delta * s - y);
}

/// Margin-reweighted round loss C(w.x; y) / max(|w_ref.x|, tau).
///
/// The denominator is evaluated at the frozen reference iterate, so the loss is
/// convex in `w` and no gradient flows through it.
inline LossEval reweighted_loss(VectorView w, VectorView x, Label y, VectorView w_ref,
                                double tau, double delta_tilde) {
  if (!(tau > 0.0)) throw ConfigError("reweighted_loss: tau must be positive");
  if (w.size() != x.size() || w_ref.size() != x.size()) {
    throw ConfigError("reweighted_loss: dimension mismatch");
  }
  const double denom = std::max(std::abs(dot(w_ref, x)), tau);
  const double score = dot(w, x);
  const double yr = to_real(y);
  LossEval out;
  out.value = c_delta(delta_tilde, score, yr) / denom;
  out.subgrad = scaled(x, c_delta_subgrad(delta_tilde, score, yr) / denom);
  return out;
}

/// Parameters of the k-arm loss generator G(w; X, v, r, alpha).
struct GLossParams {
  const Context& context;
  VectorView v;             // reference vector, usually the current iterate; may be zero
  VectorView rewards;       // true or fake reward vector, length k
  std::size_t alpha = 0;    // chosen arm (0-based)
  double delta = 0.0;       // reward margin
  double rho = 0.0;         // perturbation radius
  double lambda_cap = 0.0;  // scale of the zero-reference branch
};

namespace detail {

inline void check(const GLossParams& p, std::size_t dim) {
  if (p.context.arms() == 0) throw ConfigError("g_loss: empty context");
  if (p.alpha >= p.context.arms()) throw ConfigError("g_loss: alpha out of range");
  if (p.rewards.size() != p.context.arms()) throw ConfigError("g_loss: reward length != k");
  if (p.v.size() != p.context.dim() || dim != p.context.dim()) {
    throw ConfigError("g_loss: dimension mismatch");
  }
  if (!(p.rho > 0.0)) throw ConfigError("g_loss: rho must be positive");
  if (!(p.lambda_cap > 0.0)) throw ConfigError("g_loss: lambda_cap must be positive");
}

}  // namespace detail

/// Perturbed difference z_j = X_{alpha-j} + rho sign(X_{alpha-j}.v) v/|v|. Requires v != 0.
inline Vector perturbed_difference(const Context& context, std::size_t alpha, std::size_t j,
                                   VectorView v, double rho) {
  Vector z = context.column_difference(alpha, j);
  const double v_norm = norm(v);
  const double s = to_real(sign_of(dot(z, v)));
  axpy(rho * s / v_norm, v, z);
  return z;
}

inline LossEval g_loss(VectorView w, const GLossParams& p) {
  detail::check(p, w.size());
  const Context& ctx = p.context;
  const std::size_t k = ctx.arms();
  const double r_alpha = p.rewards[p.alpha];

  LossEval out;
  out.subgrad.assign(w.size(), 0.0);

  if (is_zero(p.v)) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j == p.alpha) continue;
      const double y = r_alpha - p.rewards[j];
      const Vector diff = ctx.column_difference(p.alpha, j);
      out.value -= p.lambda_cap * dot(w, diff) * y;
      axpy(-p.lambda_cap * y, diff, out.subgrad);
    }
    return out;
  }

  for (std::size_t j = 0; j < k; ++j) {
    if (j == p.alpha) continue;
    const double y = r_alpha - p.rewards[j];
    const Vector z = perturbed_difference(ctx, p.alpha, j, p.v, p.rho);
    const double denom = std::abs(dot(p.v, z));
    const double score = dot(w, z);
    out.value += c_delta(p.delta, score, y) / denom;
    axpy(c_delta_subgrad(p.delta, score, y) / denom, z, out.subgrad);
  }
  return out;
}

/// Lipschitz constant 2 M k max(Lambda, 1/rho) of g_loss for rewards in [0, M] and unit v.
inline double g_loss_lipschitz(double reward_cap, std::size_t k, double lambda_cap, double rho) {
  return 2.0 * reward_cap * static_cast<double>(k) * std::max(lambda_cap, 1.0 / rho);
}

}  // namespace massart
