#include "hseval/alpha_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

namespace hseval {

namespace {

constexpr double kAlphaMin = 0.01;
constexpr double kAlphaMax = 0.99;
constexpr double kTargetSlack = 1e-12;

// Grid points are snapped to 1e-12 so that 0.01 + k * 0.01 prints and
// compares as the intended two-decimal value.
double snap(double a) { return std::round(a * 1e12) / 1e12; }

}  // namespace

std::vector<HotspotUnit> order_units(std::vector<HotspotUnit> units) {
  std::sort(units.begin(), units.end(),
            [](const HotspotUnit& a, const HotspotUnit& b) {
              if (a.area_fraction != b.area_fraction) {
                return a.area_fraction < b.area_fraction;
              }
              if (a.crime_fraction != b.crime_fraction) {
                return a.crime_fraction > b.crime_fraction;
              }
              return a.id < b.id;
            });
  return units;
}

std::vector<CumulativeLevel> cumulative_levels(
    std::span<const HotspotUnit> ordered) {
  std::vector<CumulativeLevel> levels;
  levels.reserve(ordered.size());
  double area = 0.0;
  double crime = 0.0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    area += ordered[i].area_fraction;
    crime += ordered[i].crime_fraction;
    levels.push_back({i + 1, area, crime});
  }
  return levels;
}

std::vector<double> alpha_grid(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > kAlphaMax - kAlphaMin) {
    throw Error(fmt::format("alpha grid: step {} is outside (0, {}]",
                            grid_step, kAlphaMax - kAlphaMin));
  }
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double a = snap(kAlphaMin + static_cast<double>(k) * grid_step);
    if (a > kAlphaMax + kTargetSlack) break;
    grid.push_back(a);
  }
  return grid;
}

AlphaSearchResult optimal_alpha(std::span<const CumulativeLevel> levels,
                                double target_coverage, double grid_step) {
  if (levels.empty()) throw Error("optimal_alpha: no cumulative levels");
  if (!(target_coverage > 0.0 && target_coverage < 1.0)) {
    throw Error(fmt::format("optimal_alpha: target coverage {} is outside (0,1)",
                            target_coverage));
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].cum_area < levels[i - 1].cum_area ||
        levels[i].cum_crime < levels[i - 1].cum_crime) {
      throw Error("optimal_alpha: cumulative levels must be non-decreasing");
    }
  }

  std::optional<std::size_t> target;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].cum_area <= target_coverage + kTargetSlack) target = i;
  }
  if (!target) {
    throw Error(fmt::format(
        "optimal_alpha: no feasible level; the smallest cumulative coverage "
        "{} exceeds the target {}",
        levels.front().cum_area, target_coverage));
  }
  const std::size_t t = *target;

  AlphaSearchResult result;
  result.target_level = levels[t];

  std::optional<double> best_alpha;
  double best_gap = -std::numeric_limits<double>::infinity();
  std::optional<double> lo;
  std::optional<double> hi;

  std::vector<double> scores(levels.size());
  for (double alpha : alpha_grid(grid_step)) {
    std::size_t peak = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      scores[i] = levels[i].ppai(alpha);
      if (scores[i] > scores[peak]) peak = i;
    }
    result.per_alpha.push_back({alpha, levels[peak].prefix_len});

    bool unique_peak = true;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i != t && !(scores[t] > scores[i])) {
        unique_peak = false;
        break;
      }
    }
    if (!unique_peak) continue;

    if (!lo) lo = alpha;
    hi = alpha;

    double gap = std::numeric_limits<double>::infinity();
    if (t > 0) gap = std::min(gap, scores[t] - scores[t - 1]);
    if (t + 1 < levels.size()) gap = std::min(gap, scores[t] - scores[t + 1]);
    // Strict comparison keeps the smaller alpha on ties.
    if (!best_alpha || gap > best_gap) {
      best_alpha = alpha;
      best_gap = gap;
    }
  }

  if (!best_alpha) {
    throw AlphaSearchError(
        fmt::format("optimal_alpha: no alpha on the grid makes level {} "
                    "(cumulative coverage {:.6g}) the unique PPAI peak",
                    levels[t].prefix_len, levels[t].cum_area),
        levels[t], std::move(result.per_alpha));
  }
  result.alpha_star = *best_alpha;
  result.valid_range = {*lo, *hi};
  return result;
}

}  // namespace hseval
