#include "hseval/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

namespace {

constexpr double kFractionSlack = 1e-9;

Rate ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

RateSet rates_from_contingency(const ContingencyTable& t) {
  RateSet r;
  r.sensitivity = ratio(t.tp, t.tp + t.fn);
  r.specificity = ratio(t.tn, t.tn + t.fp);
  r.ppv = ratio(t.tp, t.tp + t.fp);
  r.npv = ratio(t.tn, t.tn + t.fn);
  r.accuracy = ratio(t.tp + t.tn, t.total());
  if (r.specificity) r.fpr = 1.0 - *r.specificity;
  return r;
}

HotspotUnit::HotspotUnit(std::string id_, double area, double crime)
    : id(std::move(id_)), area_fraction(area), crime_fraction(crime) {
  if (!(area > 0.0 && area <= 1.0)) {
    throw Error(fmt::format("unit '{}': area fraction {} is outside (0,1]", id,
                            area));
  }
  if (!(crime >= 0.0 && crime <= 1.0)) {
    throw Error(fmt::format("unit '{}': crime fraction {} is outside [0,1]",
                            id, crime));
  }
}

double hit_rate(std::span<const HotspotUnit> selected) {
  if (selected.empty()) throw Error("hit_rate: empty selection");
  double sum = 0.0;
  for (const auto& u : selected) sum += u.crime_fraction;
  if (sum > 1.0 + kFractionSlack) {
    throw Error(fmt::format("hit_rate: crime fractions sum to {} > 1", sum));
  }
  return sum;
}

double coverage(std::span<const HotspotUnit> selected) {
  if (selected.empty()) throw Error("coverage: empty selection");
  double sum = 0.0;
  for (const auto& u : selected) sum += u.area_fraction;
  if (sum > 1.0 + kFractionSlack) {
    throw Error(fmt::format("coverage: area fractions sum to {} > 1", sum));
  }
  return sum;
}

std::size_t hits(const HotspotSelection& sel, const EventSet& events) {
  std::size_t n = 0;
  for (const auto& e : events.events()) {
    if (e.period == sel.period() && sel.is_flagged(e.cell)) ++n;
  }
  return n;
}

double hit_rate(const HotspotSelection& sel, const EventSet& events) {
  const std::size_t total = events.count(sel.period());
  if (total == 0) {
    throw Error(fmt::format("hit_rate: no events in period {}",
                            sel.period().value));
  }
  return static_cast<double>(hits(sel, events)) / static_cast<double>(total);
}

double coverage(const GridSpec& grid, const HotspotSelection& sel) {
  return sel.flagged_area(grid) / grid.total_area();
}

double pai(double hit, double cov) {
  if (!(cov > 0.0)) throw Error(fmt::format("pai: coverage {} <= 0", cov));
  return hit / cov;
}

double ppai(double hit, double cov, double alpha) {
  if (!(cov > 0.0)) throw Error(fmt::format("ppai: coverage {} <= 0", cov));
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(fmt::format("ppai: alpha {} is outside [0,1]", alpha));
  }
  if (alpha == 0.0) return hit;
  if (alpha == 1.0) return hit / cov;
  return hit / std::pow(cov, alpha);
}

double ser(std::size_t hits, double patrolled_area_km2) {
  if (!(patrolled_area_km2 > 0.0)) {
    throw Error(
        fmt::format("ser: patrolled area {} km2 <= 0", patrolled_area_km2));
  }
  return static_cast<double>(hits) / patrolled_area_km2;
}

double als(const ProbabilitySurface& surface, const EventSet& events,
           PeriodId period, const AlsOptions& options) {
  if (options.floor && !(*options.floor > 0.0)) {
    throw Error("als: floor must be positive");
  }
  // Mean taken relative to the first term, so identical masses give their
  // log back exactly.
  double first = 0.0;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : events.events()) {
    if (e.period != period) continue;
    if (options.restrict_to && !options.restrict_to->is_flagged(e.cell)) {
      continue;
    }
    double m = surface.mass_at(e.cell);
    if (options.floor) {
      m = std::max(m, *options.floor);
    } else if (m <= 0.0) {
      throw Error(fmt::format(
          "als: zero probability at cell '{}' for event '{}' (period {})",
          e.cell.value, e.id, period.value));
    }
    const double l = std::log(m);
    if (n == 0) first = l;
    sum += l - first;
    ++n;
  }
  if (n == 0) {
    throw Error(fmt::format("als: no in-scope events in period {}",
                            period.value));
  }
  return first + sum / static_cast<double>(n);
}

}  // namespace hseval
