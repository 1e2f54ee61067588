#pragma once

// Combining measures: expected utility over the four label-conditional
// outcome rates, and weighted aggregation of per-measure model scores.

#include <map>
#include <string>

#include "hseval/grid.hpp"

namespace hseval {

using ModelScores = std::map<ModelId, double>;

/// Outcome rates conditioned on the model's label. The positive-label pair
/// and the negative-label pair each sum to one.
struct LabelConditionalRates {
  LabelConditionalRates(double p_tp_given_pos, double p_fp_given_pos,
                        double p_tn_given_neg, double p_fn_given_neg,
                        double share_positive);

  double p_tp_given_pos;
  double p_fp_given_pos;
  double p_tn_given_neg;
  double p_fn_given_neg;
  double share_positive;
};

struct UtilitySpec {
  double u_tp = 1.0;
  double u_fp = -0.5;
  double u_tn = 1.0;
  double u_fn = -1.0;
};

/// Positive weights summing to one (tolerance 1e-9).
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit WeightVector(std::map<MeasureId, double> weights);

  const std::map<MeasureId, double>& weights() const noexcept {
    return weights_;
  }

 private:
  std::map<MeasureId, double> weights_;
};

enum class Orientation { higher_is_better, lower_is_better };

LabelConditionalRates conditional_rates(const ContingencyTable& t);

double expected_utility(const LabelConditionalRates& r, const UtilitySpec& u);

/// Hit rate recovered from the conditional rates and the positive share.
double hit_rate_from_conditionals(const LabelConditionalRates& r);

/// Z-scores using the population standard deviation. Constant scores are an
/// error; fall back to rank_models() for those.
ModelScores standardize(const ModelScores& scores);

/// Rank 1 is best; tied models share the mean of the ranks they span.
ModelScores rank_models(const ModelScores& scores, Orientation orientation);

/// Negates lower-is-better scores so that larger always means better.
ModelScores orient(const ModelScores& scores, Orientation orientation);

/// Per model, the weighted sum of its scores across measures. The inputs
/// are used as given (raw, standardised or ranks).
ModelScores weighted_aggregate(
    const std::map<MeasureId, ModelScores>& per_measure_scores,
    const WeightVector& weights);

}  // namespace hseval
