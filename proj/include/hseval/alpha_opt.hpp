#pragma once

// Grid search for the PPAI exponent that makes PPAI peak at a chosen
// cumulative hotspot coverage.

#include <cstddef>
#include <span>
#include <vector>

#include "hseval/error.hpp"
#include "hseval/metrics.hpp"

namespace hseval {

struct CumulativeLevel {
  std::size_t prefix_len = 0;
  double cum_area = 0.0;
  double cum_crime = 0.0;

  double ppai(double alpha) const {
    return hseval::ppai(cum_crime, cum_area, alpha);
  }
};

struct AlphaRange {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double a) const noexcept { return lo <= a && a <= hi; }
};

struct AlphaDiagnostic {
  double alpha = 0.0;
  /// Level with the highest PPAI at this alpha (first one on ties).
  std::size_t peak_prefix_len = 0;
};

struct AlphaSearchResult {
  double alpha_star = 0.0;
  AlphaRange valid_range;
  CumulativeLevel target_level;
  std::vector<AlphaDiagnostic> per_alpha;
};

/// Raised when no grid alpha makes the target level the unique peak.
class AlphaSearchError : public Error {
 public:
  AlphaSearchError(const std::string& what, CumulativeLevel target,
                   std::vector<AlphaDiagnostic> diagnostics)
      : Error(what), target_(target), diagnostics_(std::move(diagnostics)) {}

  const CumulativeLevel& target_level() const noexcept { return target_; }
  const std::vector<AlphaDiagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  CumulativeLevel target_;
  std::vector<AlphaDiagnostic> diagnostics_;
};

/// Smallest area first; within equal area the higher crime share first;
/// remaining ties by id.
std::vector<HotspotUnit> order_units(std::vector<HotspotUnit> units);

/// Running sums over already ordered units.
std::vector<CumulativeLevel> cumulative_levels(
    std::span<const HotspotUnit> ordered);

/// The alpha grid: 0.01, 0.01 + step, ... up to 0.99.
std::vector<double> alpha_grid(double grid_step = 0.01);

/// Picks the target level (longest prefix with cum_area <= target), keeps
/// the grid alphas where that level strictly beats every other level, and
/// among those returns the one maximising the smaller of the two gaps to
/// the neighbouring levels. Residual ties go to the smaller alpha.
AlphaSearchResult optimal_alpha(std::span<const CumulativeLevel> levels,
                                double target_coverage,
                                double grid_step = 0.01);

}  // namespace hseval
