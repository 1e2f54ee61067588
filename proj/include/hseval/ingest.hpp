#pragma once

// Loading and validating input files. All tabular inputs are comma
// separated with a mandatory header row:
//
//   cells       cell_id,area_km2
//   events      event_id,cell_id,period_id
//   selections  model_id,period_id,cell_id      (presence = flagged)
//   surfaces    model_id,period_id,cell_id,probability
//   units       unit_id,area_fraction,crime_fraction
//   rates       model_id,p_tp_given_pos,p_fp_given_pos,p_tn_given_neg,
//               p_fn_given_neg,share_positive
//
// When a selections file accompanies a units file its cell_id column holds
// unit ids. Blank lines and lines starting with '#' are ignored. Every
// failure is reported as a ParseError naming file, line and field.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hseval/combine.hpp"
#include "hseval/grid.hpp"
#include "hseval/metrics.hpp"
#include "hseval/synth.hpp"

namespace hseval {

using SelectionsByModel =
    std::map<ModelId, std::map<PeriodId, HotspotSelection>>;
using SurfacesByModel =
    std::map<ModelId, std::map<PeriodId, ProbabilitySurface>>;
using UnitSelections =
    std::map<ModelId, std::map<PeriodId, std::vector<std::string>>>;

struct LoadOptions {
  bool strict = true;
  bool renormalize = false;
};

struct LoadedEvents {
  EventSet events;
  std::size_t dropped = 0;
};

GridSpec load_grid(const std::filesystem::path& path);
LoadedEvents load_events(const std::filesystem::path& path,
                         const GridSpec& grid, bool strict = true);
SelectionsByModel load_selections(const std::filesystem::path& path,
                                  const GridSpec& grid, bool strict = true,
                                  std::size_t* dropped = nullptr);
SurfacesByModel load_surfaces(const std::filesystem::path& path,
                              const GridSpec& grid,
                              const LoadOptions& options = {});
std::vector<HotspotUnit> load_units(const std::filesystem::path& path);
UnitSelections load_unit_selections(const std::filesystem::path& path,
                                    const std::vector<HotspotUnit>& units);
std::map<ModelId, LabelConditionalRates> load_rates(
    const std::filesystem::path& path);

void write_grid(std::ostream& out, const GridSpec& grid);
void write_events(std::ostream& out, const EventSet& events);
void write_selections(std::ostream& out, const SelectionsByModel& selections);
void write_surfaces(std::ostream& out, const SurfacesByModel& surfaces);
void write_units(std::ostream& out, const std::vector<HotspotUnit>& units);

struct DatasetPaths {
  std::optional<std::filesystem::path> cells;
  std::optional<std::filesystem::path> events;
  std::optional<std::filesystem::path> selections;
  std::optional<std::filesystem::path> surfaces;
  std::optional<std::filesystem::path> units;
  std::optional<std::filesystem::path> rates;
};

struct ModelPredictions {
  std::map<PeriodId, HotspotSelection> selections;
  std::map<PeriodId, ProbabilitySurface> surfaces;
};

struct CellDataset {
  GridSpec grid;
  EventSet events;
  std::map<ModelId, ModelPredictions> models;
};

struct UnitDataset {
  std::vector<HotspotUnit> units;
  UnitSelections selections;
};

/// Whichever of the three input kinds were supplied, fully validated.
struct Dataset {
  std::optional<CellDataset> cells;
  std::optional<UnitDataset> units;
  std::map<ModelId, LabelConditionalRates> rates;
  std::vector<std::string> warnings;

  std::vector<ModelId> model_ids() const;
};

/// Cell data needs cells + events and at least one of selections/surfaces;
/// unit data needs units (+ selections, read as unit ids); rates stand
/// alone. At least one model must result.
Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options);

// ---------------------------------------------------------------------------
// Run configuration

enum class AlphaMode { fixed, hit_rate, grid_search };
enum class AggregateTransform { raw, standardize, rank };
enum class CompareMethod { expected_utility, weighted, both };

/// Measure ids understood by the evaluator.
const std::vector<MeasureId>& known_measures();
Orientation default_orientation(const MeasureId& measure);

struct RunConfig {
  std::vector<MeasureId> measures{"hit_rate", "coverage", "precision", "pai",
                                  "ppai"};
  AlphaMode alpha_mode = AlphaMode::hit_rate;
  double alpha = 0.5;
  double target_coverage = 0.02;
  double grid_step = 0.01;
  UtilitySpec utilities;
  std::optional<WeightVector> weights;
  std::map<MeasureId, Orientation> orientation;
  AggregateTransform transform = AggregateTransform::raw;
  CompareMethod compare_method = CompareMethod::expected_utility;
  bool als_floor = false;
  double als_floor_value = AlsOptions::kDefaultFloor;
  bool renormalize = false;
  bool strict = true;
  double significance = 0.05;

  GeneratorSpec generator;
  std::size_t gen_top_k = 10;
  double gen_smoothing = 1.0;

  RunConfig();

  Orientation orientation_of(const MeasureId& measure) const;
  /// Every setting with its effective value, sorted by key.
  std::vector<std::pair<std::string, std::string>> echo(
      bool include_generator = false) const;
};

/// Parses `key = value` lines. Unknown keys are errors when strict (the
/// `strict` key, or `strict_override` when given) and ignored otherwise.
RunConfig parse_config(const std::string& text,
                       const std::string& source = "<config>",
                       std::optional<bool> strict_override = std::nullopt,
                       std::vector<std::string>* warnings = nullptr);
RunConfig load_config(const std::filesystem::path& path,
                      std::optional<bool> strict_override = std::nullopt,
                      std::vector<std::string>* warnings = nullptr);

std::string to_string(AlphaMode mode);
std::string to_string(AggregateTransform transform);
std::string to_string(CompareMethod method);
std::string to_string(Orientation orientation);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace hseval
