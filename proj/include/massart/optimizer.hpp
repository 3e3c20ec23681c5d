#pragma once

#include "massart/core.hpp"

namespace massart {

/// Euclidean projection onto the ball of the given radius.
inline Vector project_ball(VectorView w, double radius) {
  if (!(radius > 0.0)) throw ConfigError("project_ball: radius must be positive");
  const double n = norm(w);
  if (n <= radius) return Vector(w.begin(), w.end());
  return scaled(w, radius / n);
}

/// Projected online gradient descent with a fixed step.
struct OgdState {
  WeightVector w;
  double step = 0.0;
  double radius = 1.0;
  long round = 0;
  double cumulative_loss = 0.0;
};

inline OgdState make_ogd_state(WeightVector w0, double step, double radius = 1.0) {
  if (!(step > 0.0)) throw ConfigError("ogd: step must be positive");
  if (!(radius > 0.0)) throw ConfigError("ogd: radius must be positive");
  OgdState s;
  s.w = WeightVector(project_ball(w0.view(), radius));
  s.step = step;
  s.radius = radius;
  return s;
}

// `loss_value` is the round loss at the pre-update iterate; it only feeds the running total.
inline OgdState ogd_update(OgdState state, VectorView subgrad, double loss_value = 0.0) {
  if (subgrad.size() != state.w.dim()) throw ConfigError("ogd_update: dimension mismatch");
  Vector next = state.w.coords();
  axpy(-state.step, subgrad, next);
  state.w = WeightVector(project_ball(next, state.radius));
  state.round += 1;
  state.cumulative_loss += loss_value;
  return state;
}

}  // namespace massart
