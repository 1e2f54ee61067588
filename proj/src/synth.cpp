#include "hseval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("rng: empty range");
  const std::uint64_t limit = std::mt19937_64::max() -
                              (std::mt19937_64::max() % n + 1) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x <= limit) return x % n;
  }
}

void GeneratorSpec::validate() const {
  if (cell_count == 0) throw Error("generator: cell count must be positive");
  if (period_count == 0) throw Error("generator: period count must be positive");
  if (!(cell_area_km2 > 0.0) || !std::isfinite(cell_area_km2)) {
    throw Error("generator: cell area must be positive");
  }
  if (!weights.empty()) {
    if (weights.size() != cell_count) {
      throw Error(fmt::format("generator: {} weights given for {} cells",
                              weights.size(), cell_count));
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw Error(fmt::format("generator: weight {} is negative", w));
      }
      total += w;
    }
    if (!(total > 0.0)) throw Error("generator: all weights are zero");
  }
}

std::vector<double> GeneratorSpec::resolved_weights() const {
  if (!weights.empty()) return weights;
  std::vector<double> w(cell_count);
  for (std::size_t i = 0; i < cell_count; ++i) {
    w[i] = 1.0 / static_cast<double>(i + 1);
  }
  return w;
}

GridSpec make_grid(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t width =
      std::max<std::size_t>(3, fmt::format("{}", spec.cell_count - 1).size());
  std::vector<Cell> cells;
  cells.reserve(spec.cell_count);
  for (std::size_t i = 0; i < spec.cell_count; ++i) {
    cells.push_back({CellId{fmt::format("c{:0{}}", i, width)},
                     spec.cell_area_km2});
  }
  return GridSpec(std::move(cells));
}

EventSet generate_events(const GeneratorSpec& spec, const GridSpec& grid,
                         Rng& rng) {
  spec.validate();
  if (grid.size() != spec.cell_count) {
    throw Error("generator: grid does not match the generator spec");
  }
  const auto weights = spec.resolved_weights();
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  const double total = cumulative.back();
  // Last cell with positive weight, for the u * total == total edge.
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
  }

  std::vector<Event> events;
  events.reserve(spec.period_count * spec.events_per_period);
  for (std::size_t p = 0; p < spec.period_count; ++p) {
    const PeriodId period{spec.first_period + static_cast<std::int64_t>(p)};
    for (std::size_t i = 0; i < spec.events_per_period; ++i) {
      const double u = rng.uniform01() * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      std::size_t cell = static_cast<std::size_t>(it - cumulative.begin());
      cell = std::min(cell, last_positive);
      events.push_back({fmt::format("p{}-{:06}", period.value, i),
                        grid.cells()[cell].id, period});
    }
  }
  return EventSet(grid, std::move(events));
}

EventSet generate_events(const GeneratorSpec& spec) {
  Rng rng(spec.seed);
  return generate_events(spec, make_grid(spec), rng);
}

HotspotSelection top_k_baseline(const EventSet& train, const GridSpec& grid,
                                std::size_t k, PeriodId period) {
  if (k > grid.size()) {
    throw Error(fmt::format("top-k baseline: k = {} exceeds the {} cells", k,
                            grid.size()));
  }
  const auto counts = train.counts_by_cell();
  std::vector<std::pair<std::size_t, CellId>> ranked;
  ranked.reserve(grid.size());
  for (const auto& c : grid.cells()) {
    auto it = counts.find(c.id);
    ranked.emplace_back(it == counts.end() ? 0 : it->second, c.id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<CellId> flagged;
  for (std::size_t i = 0; i < k; ++i) flagged.push_back(ranked[i].second);
  return HotspotSelection(grid, period, flagged);
}

HotspotSelection random_selection(const GridSpec& grid, std::size_t k,
                                  PeriodId period, Rng& rng) {
  if (k > grid.size()) {
    throw Error(fmt::format("random selection: k = {} exceeds the {} cells",
                            k, grid.size()));
  }
  std::vector<CellId> ids;
  for (const auto& c : grid.cells()) ids.push_back(c.id);
  // partial Fisher-Yates
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return HotspotSelection(grid, period, ids);
}

ProbabilitySurface empirical_surface(const EventSet& train,
                                     const GridSpec& grid, PeriodId period,
                                     double smoothing) {
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    throw Error("empirical surface: smoothing must be non-negative");
  }
  const auto counts = train.counts_by_cell();
  std::map<CellId, double> mass;
  double total = 0.0;
  for (const auto& c : grid.cells()) {
    auto it = counts.find(c.id);
    const double v =
        static_cast<double>(it == counts.end() ? 0 : it->second) + smoothing;
    mass.emplace(c.id, v);
    total += v;
  }
  if (!(total > 0.0)) {
    throw Error("empirical surface: no training events and no smoothing");
  }
  for (auto& [id, m] : mass) m /= total;
  return ProbabilitySurface(grid, period, std::move(mass));
}

ProbabilitySurface true_surface(const GeneratorSpec& spec,
                                const GridSpec& grid, PeriodId period) {
  spec.validate();
  const auto weights = spec.resolved_weights();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::map<CellId, double> mass;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mass.emplace(grid.cells()[i].id, weights[i] / total);
  }
  return ProbabilitySurface(grid, period, std::move(mass));
}

}  // namespace hseval
