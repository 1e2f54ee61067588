#pragma once

// The batch commands behind the CLI. Each command has a typed result and
// a function turning that result into a Report.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hseval/alpha_opt.hpp"
#include "hseval/combine.hpp"
#include "hseval/ingest.hpp"
#include "hseval/report.hpp"
#include "hseval/stats.hpp"

namespace hseval {

using MeasureValues = std::map<MeasureId, Rate>;

struct MeasureSummary {
  std::size_t n_periods = 0;
  std::size_t n_defined = 0;
  Rate mean;
  Rate std;
};

struct EvaluationResult {
  /// Units, cells or rates: which input the numbers came from.
  std::string source;
  std::vector<MeasureId> measures;
  std::map<ModelId, std::map<PeriodId, MeasureValues>> values;
  std::map<ModelId, std::map<MeasureId, MeasureSummary>> summaries;
  std::vector<std::string> warnings;
};

/// Every requested measure for every model and period, plus summaries over
/// periods. A measure that cannot be computed for a cell (no events, nothing
/// flagged, no surface) is undefined with a warning; inconsistent data is
/// an error.
EvaluationResult evaluate(const Dataset& dataset, const RunConfig& config);
Report evaluate_report(const EvaluationResult& result, const RunConfig& config);

struct PairwiseTest {
  MeasureId measure;
  ModelId model_a;
  ModelId model_b;
  WsrResult wsr;
  double p_adjusted = 1.0;
};

struct RankedModel {
  ModelId model;
  double score = 0.0;
  std::size_t position = 0;  // 1 = best; tied models share a position
  bool tied = false;
};

struct Ranking {
  std::string rule;
  std::vector<RankedModel> order;
};

struct ComparisonResult {
  std::optional<ModelScores> expected_utility;
  /// Per-measure model scores after orientation and transform.
  std::map<MeasureId, ModelScores> weighted_inputs;
  std::optional<ModelScores> weighted;
  std::vector<PairwiseTest> tests;
  std::vector<Ranking> rankings;
  std::vector<std::string> warnings;
};

ComparisonResult compare(const Dataset& dataset, const RunConfig& config);
Report compare_report(const ComparisonResult& result, const RunConfig& config);

struct AlphaOptimization {
  double target_coverage = 0.0;
  double grid_step = 0.0;
  std::vector<HotspotUnit> ordered;
  std::vector<CumulativeLevel> levels;
  AlphaSearchResult search;
};

AlphaOptimization optimize_alpha(std::vector<HotspotUnit> units,
                                 double target_coverage, double grid_step);
Report optimize_alpha_report(const AlphaOptimization& result,
                             const RunConfig& config);

/// A complete synthetic dataset. Period 0 is training only; models
/// predict periods 1..gen.periods:
///   top_k    top-k cells and smoothed empirical surface of the previous period
///   uniform  k random cells and the uniform surface
///   oracle   k highest-weight cells and the generating surface
struct GeneratedDataset {
  GridSpec grid;
  EventSet events;
  SelectionsByModel selections;
  SurfacesByModel surfaces;
};

GeneratedDataset generate_dataset(const RunConfig& config);
/// Writes cells.csv, events.csv, selections.csv and surfaces.csv.
void write_dataset(const GeneratedDataset& data,
                   const std::filesystem::path& dir);
Report gen_report(const GeneratedDataset& data, const RunConfig& config,
                  const std::filesystem::path& dir);

}  // namespace hseval
