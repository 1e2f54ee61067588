#pragma once

// Summaries over test periods and paired significance tests between models.

#include <optional>
#include <utility>
#include <vector>

#include "hseval/grid.hpp"

namespace hseval {

class PeriodSeries {
 public:
  /// One value per period, at least one entry.
  PeriodSeries(MeasureId measure, ModelId model,
               std::vector<std::pair<PeriodId, double>> values);

  const MeasureId& measure() const noexcept { return measure_; }
  const ModelId& model() const noexcept { return model_; }
  const std::vector<std::pair<PeriodId, double>>& values() const noexcept {
    return values_;
  }

 private:
  MeasureId measure_;
  ModelId model_;
  std::vector<std::pair<PeriodId, double>> values_;  // sorted by period
};

struct Summary {
  double mean = 0.0;
  /// Sample standard deviation; undefined for a single value.
  std::optional<double> std;
};

Summary summarize(const PeriodSeries& series);

enum class WsrMethod { exact, normal_approximation };

struct WsrOptions {
  bool two_sided = true;
  /// Exact null distribution up to this many non-zero differences.
  std::size_t exact_max_n = 25;
  /// Overrides the automatic choice.
  std::optional<WsrMethod> force_method;
};

struct WsrResult {
  std::size_t n_used = 0;
  double w_plus = 0.0;
  double p_value = 1.0;
  WsrMethod method = WsrMethod::exact;
};

/// Wilcoxon signed-rank test on d = x - y. Zero differences are dropped,
/// tied |d| get mid-ranks. The one-sided alternative is x > y.
/// With no non-zero difference the result is p = 1, n_used = 0.
WsrResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                               const WsrOptions& options = {});

/// p * m capped at 1.
std::vector<double> bonferroni(const std::vector<double>& p_values);

}  // namespace hseval
