#pragma once

// Domain types shared by every measure: the gridded study region, the
// observed events and the two kinds of model output (hotspot flags and
// probability surfaces).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hseval {

using ModelId = std::string;
using MeasureId = std::string;

struct CellId {
  std::string value;
  auto operator<=>(const CellId&) const = default;
};

/// Ordinal index of a time period.
struct PeriodId {
  std::int64_t value = 0;
  auto operator<=>(const PeriodId&) const = default;
};

struct Cell {
  CellId id;
  double area_km2 = 0.0;
};

/// The discretised study region. Immutable once built.
class GridSpec {
 public:
  /// Total area is the sum of the cell areas.
  explicit GridSpec(std::vector<Cell> cells);
  /// Checks `total_area_km2` against the cell sum (relative tolerance 1e-9).
  GridSpec(std::vector<Cell> cells, double total_area_km2);

  std::span<const Cell> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  double total_area() const noexcept { return total_area_; }

  bool contains(const CellId& id) const { return index_.contains(id); }
  std::optional<std::size_t> index_of(const CellId& id) const;
  const Cell& at(const CellId& id) const;

 private:
  std::vector<Cell> cells_;
  std::map<CellId, std::size_t> index_;
  double total_area_ = 0.0;
};

/// Cells a model flags as hotspots for one period.
class HotspotSelection {
 public:
  /// Duplicate ids collapse; unknown ids throw.
  HotspotSelection(const GridSpec& grid, PeriodId period,
                   const std::vector<CellId>& flagged);

  PeriodId period() const noexcept { return period_; }
  const std::set<CellId>& flagged() const noexcept { return flagged_; }
  bool is_flagged(const CellId& id) const { return flagged_.contains(id); }
  double flagged_area(const GridSpec& grid) const;

 private:
  PeriodId period_;
  std::set<CellId> flagged_;
};

struct Event {
  std::string id;
  CellId cell;
  PeriodId period;
  bool operator==(const Event&) const = default;
};

/// Observed events, each assigned to a grid cell and a period.
class EventSet {
 public:
  EventSet() = default;
  /// Throws if any event references a cell outside `grid`.
  EventSet(const GridSpec& grid, std::vector<Event> events);

  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  std::size_t count(PeriodId period) const;
  std::map<CellId, std::size_t> counts_by_cell(PeriodId period) const;
  /// Counts over every period.
  std::map<CellId, std::size_t> counts_by_cell() const;
  std::set<PeriodId> periods() const;

  /// Events whose period lies in [first, last].
  EventSet between(PeriodId first, PeriodId last) const;

 private:
  std::vector<Event> events_;
};

/// Per-cell probability mass for one period.
class ProbabilitySurface {
 public:
  static constexpr double kSumTolerance = 1e-6;

  /// Every grid cell needs an entry in [0,1]. Masses must sum to one within
  /// kSumTolerance unless `renormalize` is set, in which case they are
  /// divided by their (positive) sum.
  ProbabilitySurface(const GridSpec& grid, PeriodId period,
                     std::map<CellId, double> mass, bool renormalize = false);

  static ProbabilitySurface uniform(const GridSpec& grid, PeriodId period);

  PeriodId period() const noexcept { return period_; }
  const std::map<CellId, double>& mass() const noexcept { return mass_; }
  double mass_at(const CellId& id) const;

 private:
  PeriodId period_;
  std::map<CellId, double> mass_;
};

struct ContingencyTable {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ContingencyTable&) const = default;
};

struct AssignResult {
  EventSet events;
  std::vector<Event> rejected;
};

/// Keeps the rows whose cell exists in `grid`. In strict mode any unknown
/// cell is an error naming the first offending event.
AssignResult assign_events(const GridSpec& grid, std::vector<Event> raw,
                           bool strict = true);

/// Cell-level classification: a flagged cell with at least one event in
/// `period` is one TP however many events it holds.
ContingencyTable contingency(const GridSpec& grid, const HotspotSelection& sel,
                             const EventSet& events, PeriodId period);

}  // namespace hseval
