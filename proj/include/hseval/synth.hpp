#pragma once

// Seeded synthetic data and trivial baseline predictors.
//
// Random numbers come from std::mt19937_64, whose output sequence is fixed
// by the C++ standard. Uniform doubles are built from the top 53 bits of
// each draw, so results do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "hseval/grid.hpp"

namespace hseval {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

struct GeneratorSpec {
  std::size_t cell_count = 100;
  double cell_area_km2 = 1.0;
  /// Unnormalised per-cell event weights; empty means w_i = 1 / (i + 1).
  std::vector<double> weights;
  std::size_t period_count = 6;
  std::int64_t first_period = 0;
  std::size_t events_per_period = 200;
  std::uint64_t seed = 42;

  void validate() const;
  std::vector<double> resolved_weights() const;
};

/// Cells "c000", "c001", ... of equal area.
GridSpec make_grid(const GeneratorSpec& spec);

/// Draws events_per_period categorical samples per period.
EventSet generate_events(const GeneratorSpec& spec, const GridSpec& grid,
                         Rng& rng);
EventSet generate_events(const GeneratorSpec& spec);

/// Flags the k cells with the most training events; ties by cell id.
HotspotSelection top_k_baseline(const EventSet& train, const GridSpec& grid,
                                std::size_t k, PeriodId period);

/// k distinct cells chosen uniformly at random.
HotspotSelection random_selection(const GridSpec& grid, std::size_t k,
                                  PeriodId period, Rng& rng);

/// Mass proportional to (training count + smoothing).
ProbabilitySurface empirical_surface(const EventSet& train,
                                     const GridSpec& grid, PeriodId period,
                                     double smoothing);

/// The generating distribution itself.
ProbabilitySurface true_surface(const GeneratorSpec& spec,
                                const GridSpec& grid, PeriodId period);

}  // namespace hseval
