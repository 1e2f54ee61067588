#include "hseval/combine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

namespace {

constexpr double kPairTolerance = 1e-9;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(fmt::format("conditional rates: {} = {} is outside [0,1]",
                            name, p));
  }
}

}  // namespace

LabelConditionalRates::LabelConditionalRates(double tp, double fp, double tn,
                                             double fn, double share)
    : p_tp_given_pos(tp),
      p_fp_given_pos(fp),
      p_tn_given_neg(tn),
      p_fn_given_neg(fn),
      share_positive(share) {
  check_probability(tp, "p_tp_given_pos");
  check_probability(fp, "p_fp_given_pos");
  check_probability(tn, "p_tn_given_neg");
  check_probability(fn, "p_fn_given_neg");
  check_probability(share, "share_positive");
  if (std::abs(tp + fp - 1.0) > kPairTolerance) {
    throw Error(fmt::format(
        "conditional rates: TP and FP rates sum to {}, not 1", tp + fp));
  }
  if (std::abs(tn + fn - 1.0) > kPairTolerance) {
    throw Error(fmt::format(
        "conditional rates: TN and FN rates sum to {}, not 1", tn + fn));
  }
}

WeightVector::WeightVector(std::map<MeasureId, double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("weights: no measures given");
  double sum = 0.0;
  for (const auto& [measure, w] : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(fmt::format("weights: weight {} for '{}' is not positive", w,
                              measure));
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(fmt::format("weights: sum is {:.12g}, not 1", sum));
  }
}

LabelConditionalRates conditional_rates(const ContingencyTable& t) {
  const std::size_t pos = t.tp + t.fp;
  const std::size_t neg = t.tn + t.fn;
  if (pos == 0) throw Error("conditional rates: no cell is labelled '+'");
  if (neg == 0) throw Error("conditional rates: no cell is labelled '-'");
  const auto p = static_cast<double>(pos);
  const auto n = static_cast<double>(neg);
  return LabelConditionalRates(
      static_cast<double>(t.tp) / p, static_cast<double>(t.fp) / p,
      static_cast<double>(t.tn) / n, static_cast<double>(t.fn) / n,
      p / static_cast<double>(t.total()));
}

double expected_utility(const LabelConditionalRates& r, const UtilitySpec& u) {
  const double eu_pos = r.p_tp_given_pos * u.u_tp + r.p_fp_given_pos * u.u_fp;
  const double eu_neg = r.p_tn_given_neg * u.u_tn + r.p_fn_given_neg * u.u_fn;
  return r.share_positive * eu_pos + (1.0 - r.share_positive) * eu_neg;
}

double hit_rate_from_conditionals(const LabelConditionalRates& r) {
  const double caught = r.p_tp_given_pos * r.share_positive;
  const double missed = r.p_fn_given_neg * (1.0 - r.share_positive);
  if (!(caught + missed > 0.0)) {
    throw Error("hit rate: no crime under either label");
  }
  return caught / (caught + missed);
}

ModelScores standardize(const ModelScores& scores) {
  if (scores.size() < 2) {
    throw Error("standardize: need at least two models");
  }
  const auto m = static_cast<double>(scores.size());
  double mean = 0.0;
  for (const auto& [id, s] : scores) mean += s;
  mean /= m;
  double ss = 0.0;
  for (const auto& [id, s] : scores) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / m);
  if (!(sd > 0.0)) {
    throw Error(
        "standardize: zero variance across models; use rank aggregation "
        "instead");
  }
  ModelScores out;
  for (const auto& [id, s] : scores) out.emplace(id, (s - mean) / sd);
  return out;
}

ModelScores rank_models(const ModelScores& scores, Orientation orientation) {
  std::vector<std::pair<double, ModelId>> sorted;
  sorted.reserve(scores.size());
  for (const auto& [id, s] : scores) sorted.emplace_back(s, id);
  const bool higher = orientation == Orientation::higher_is_better;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [higher](const auto& a, const auto& b) {
                     return higher ? a.first > b.first : a.first < b.first;
                   });
  ModelScores ranks;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1].first == sorted[i].first) {
      ++j;
    }
    // positions i..j (0-based) share the mid-rank
    const double mid = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks.emplace(sorted[k].second, mid);
    i = j + 1;
  }
  return ranks;
}

ModelScores orient(const ModelScores& scores, Orientation orientation) {
  if (orientation == Orientation::higher_is_better) return scores;
  ModelScores out;
  for (const auto& [id, s] : scores) out.emplace(id, -s);
  return out;
}

ModelScores weighted_aggregate(
    const std::map<MeasureId, ModelScores>& per_measure_scores,
    const WeightVector& weights) {
  for (const auto& [measure, w] : weights.weights()) {
    if (!per_measure_scores.contains(measure)) {
      throw Error(fmt::format(
          "weighted aggregate: weighted measure '{}' has no scores", measure));
    }
  }
  for (const auto& [measure, scores] : per_measure_scores) {
    if (!weights.weights().contains(measure)) {
      throw Error(fmt::format(
          "weighted aggregate: measure '{}' has no weight", measure));
    }
  }

  const auto& reference = per_measure_scores.begin()->second;
  ModelScores out;
  for (const auto& [model, unused] : reference) out.emplace(model, 0.0);
  for (const auto& [measure, scores] : per_measure_scores) {
    if (scores.size() != reference.size()) {
      throw Error(fmt::format(
          "weighted aggregate: measure '{}' covers {} models, expected {}",
          measure, scores.size(), reference.size()));
    }
    const double w = weights.weights().at(measure);
    for (auto& [model, total] : out) {
      auto it = scores.find(model);
      if (it == scores.end()) {
        throw Error(fmt::format(
            "weighted aggregate: model '{}' is missing under measure '{}'",
            model, measure));
      }
      total += w * it->second;
    }
  }
  return out;
}

}  // namespace hseval
