#include "hseval/grid.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

namespace {

double sum_areas(const std::vector<Cell>& cells) {
  double total = 0.0;
  for (const auto& c : cells) total += c.area_km2;
  return total;
}

}  // namespace

GridSpec::GridSpec(std::vector<Cell> cells)
    : GridSpec(std::move(cells), std::nan("")) {}

GridSpec::GridSpec(std::vector<Cell> cells, double total_area_km2)
    : cells_(std::move(cells)) {
  if (cells_.empty()) throw Error("grid: at least one cell is required");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    if (!(c.area_km2 > 0.0) || !std::isfinite(c.area_km2)) {
      throw Error(fmt::format("grid: cell '{}' has non-positive area {}",
                              c.id.value, c.area_km2));
    }
    if (!index_.emplace(c.id, i).second) {
      throw Error(fmt::format("grid: duplicate cell id '{}'", c.id.value));
    }
  }
  const double sum = sum_areas(cells_);
  if (std::isnan(total_area_km2)) {
    total_area_ = sum;
  } else {
    if (std::abs(total_area_km2 - sum) > 1e-9 * sum) {
      throw Error(fmt::format(
          "grid: total area {} does not match the cell sum {}",
          total_area_km2, sum));
    }
    total_area_ = total_area_km2;
  }
}

std::optional<std::size_t> GridSpec::index_of(const CellId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Cell& GridSpec::at(const CellId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(fmt::format("grid: unknown cell '{}'", id.value));
  }
  return cells_[it->second];
}

HotspotSelection::HotspotSelection(const GridSpec& grid, PeriodId period,
                                   const std::vector<CellId>& flagged)
    : period_(period) {
  for (const auto& id : flagged) {
    if (!grid.contains(id)) {
      throw Error(fmt::format("selection: unknown cell '{}' in period {}",
                              id.value, period.value));
    }
    flagged_.insert(id);
  }
}

double HotspotSelection::flagged_area(const GridSpec& grid) const {
  double area = 0.0;
  for (const auto& id : flagged_) area += grid.at(id).area_km2;
  return area;
}

EventSet::EventSet(const GridSpec& grid, std::vector<Event> events)
    : events_(std::move(events)) {
  for (const auto& e : events_) {
    if (!grid.contains(e.cell)) {
      throw Error(fmt::format("events: event '{}' references unknown cell '{}'",
                              e.id, e.cell.value));
    }
  }
}

std::size_t EventSet::count(PeriodId period) const {
  std::size_t n = 0;
  for (const auto& e : events_) n += e.period == period ? 1 : 0;
  return n;
}

std::map<CellId, std::size_t> EventSet::counts_by_cell(PeriodId period) const {
  std::map<CellId, std::size_t> counts;
  for (const auto& e : events_) {
    if (e.period == period) ++counts[e.cell];
  }
  return counts;
}

std::map<CellId, std::size_t> EventSet::counts_by_cell() const {
  std::map<CellId, std::size_t> counts;
  for (const auto& e : events_) ++counts[e.cell];
  return counts;
}

std::set<PeriodId> EventSet::periods() const {
  std::set<PeriodId> out;
  for (const auto& e : events_) out.insert(e.period);
  return out;
}

EventSet EventSet::between(PeriodId first, PeriodId last) const {
  EventSet out;
  for (const auto& e : events_) {
    if (first <= e.period && e.period <= last) out.events_.push_back(e);
  }
  return out;
}

ProbabilitySurface::ProbabilitySurface(const GridSpec& grid, PeriodId period,
                                       std::map<CellId, double> mass,
                                       bool renormalize)
    : period_(period), mass_(std::move(mass)) {
  for (const auto& [id, m] : mass_) {
    if (!grid.contains(id)) {
      throw Error(fmt::format("surface: unknown cell '{}' in period {}",
                              id.value, period.value));
    }
    if (!(m >= 0.0 && m <= 1.0)) {
      throw Error(fmt::format(
          "surface: mass {} at cell '{}' in period {} is outside [0,1]", m,
          id.value, period.value));
    }
  }
  for (const auto& c : grid.cells()) {
    if (!mass_.contains(c.id)) {
      throw Error(fmt::format("surface: no mass for cell '{}' in period {}",
                              c.id.value, period.value));
    }
  }
  double sum = 0.0;
  for (const auto& [id, m] : mass_) sum += m;
  if (renormalize) {
    if (!(sum > 0.0)) {
      throw Error(fmt::format("surface: all masses are zero in period {}",
                              period.value));
    }
    for (auto& [id, m] : mass_) m /= sum;
  } else if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(fmt::format(
        "surface: masses in period {} sum to {:.12g}, not 1 (tolerance {})",
        period.value, sum, kSumTolerance));
  }
}

ProbabilitySurface ProbabilitySurface::uniform(const GridSpec& grid,
                                               PeriodId period) {
  std::map<CellId, double> mass;
  const double m = 1.0 / static_cast<double>(grid.size());
  for (const auto& c : grid.cells()) mass.emplace(c.id, m);
  return ProbabilitySurface(grid, period, std::move(mass));
}

double ProbabilitySurface::mass_at(const CellId& id) const {
  auto it = mass_.find(id);
  if (it == mass_.end()) {
    throw Error(fmt::format("surface: unknown cell '{}'", id.value));
  }
  return it->second;
}

AssignResult assign_events(const GridSpec& grid, std::vector<Event> raw,
                           bool strict) {
  AssignResult result;
  std::vector<Event> kept;
  kept.reserve(raw.size());
  for (auto& e : raw) {
    if (grid.contains(e.cell)) {
      kept.push_back(std::move(e));
    } else if (strict) {
      throw Error(fmt::format("events: event '{}' references unknown cell '{}'",
                              e.id, e.cell.value));
    } else {
      result.rejected.push_back(std::move(e));
    }
  }
  result.events = EventSet(grid, std::move(kept));
  return result;
}

ContingencyTable contingency(const GridSpec& grid, const HotspotSelection& sel,
                             const EventSet& events, PeriodId period) {
  if (sel.period() != period) {
    throw Error(fmt::format(
        "contingency: selection is for period {} but period {} was requested",
        sel.period().value, period.value));
  }
  const auto counts = events.counts_by_cell(period);
  ContingencyTable t;
  for (const auto& c : grid.cells()) {
    const bool hit = counts.contains(c.id);
    if (sel.is_flagged(c.id)) {
      ++(hit ? t.tp : t.fp);
    } else {
      ++(hit ? t.fn : t.tn);
    }
  }
  return t;
}

}  // namespace hseval
