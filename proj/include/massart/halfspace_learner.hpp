#pragma once

#include "massart/core.hpp"
#include "massart/losses.hpp"
#include "massart/optimizer.hpp"

namespace massart {

struct HalfspaceStep {
  Label prediction = Label::Positive;
  bool mistake = false;
  double score = 0.0;  // w.x before the update
  double loss = 0.0;   // round loss at the pre-update iterate
};

/// Online learner for halfspaces under Massart noise.
///
/// Each round predicts sign(w.x), then takes one projected OGD step on the
/// margin-reweighted Leaky-ReLU loss whether or not the prediction was right.
class HalfspaceLearner {
 public:
  explicit HalfspaceLearner(HalfspaceConfig config) : config_(std::move(config)) {
    config_.validate_and_derive();
    ogd_ = make_ogd_state(WeightVector::e1(config_.d), config_.derived.step_size,
                          config_.domain_radius);
  }

  // Uses the given tau / delta_tilde / step instead of the derived schedule.
  HalfspaceLearner(HalfspaceConfig config, const HalfspaceParams& params)
      : HalfspaceLearner(std::move(config)) {
    if (!(params.tau > 0.0)) throw ConfigError("tau must be positive");
    config_.derived = params;
    ogd_.step = params.step_size;
  }

  Label predict(VectorView x) const {
    if (x.size() != config_.d) throw ConfigError("predict: dimension mismatch");
    return sign_of(dot(ogd_.w.view(), x));
  }

  HalfspaceStep observe(VectorView x, Label y) {
    if (round_ >= config_.horizon) throw ConfigError("observe: horizon exceeded");
    HalfspaceStep out;
    out.score = dot(ogd_.w.view(), x);
    out.prediction = predict(x);
    out.mistake = out.prediction != y;
    if (out.mistake) ++mistakes_;

    const LossEval loss = reweighted_loss(ogd_.w.view(), x, y, ogd_.w.view(), config_.derived.tau,
                                          config_.derived.delta_tilde);
    out.loss = loss.value;
    ogd_ = ogd_update(std::move(ogd_), loss.subgrad, loss.value);
    ++round_;
    return out;
  }

  const WeightVector& weights() const { return ogd_.w; }
  const OgdState& ogd() const { return ogd_; }
  const HalfspaceConfig& config() const { return config_; }
  long mistakes() const { return mistakes_; }
  long round() const { return round_; }

 private:
  HalfspaceConfig config_;
  OgdState ogd_;
  long mistakes_ = 0;
  long round_ = 0;
};

}  // namespace massart
