#pragma once

// Single-model scalar measures.

#include <optional>
#include <span>
#include <string>

#include "hseval/grid.hpp"

namespace hseval {

/// A rate whose denominator may be zero. std::nullopt is the explicit
/// "undefined" marker; reports render it as the token `undefined`.
using Rate = std::optional<double>;

struct RateSet {
  Rate sensitivity;
  Rate specificity;
  Rate ppv;
  Rate npv;
  Rate accuracy;
  Rate fpr;  // always 1 - specificity
};

RateSet rates_from_contingency(const ContingencyTable& t);

/// A pre-aggregated hotspot: its share of the total area (a/A) and of the
/// total crime (n/N).
struct HotspotUnit {
  HotspotUnit(std::string id, double area_fraction, double crime_fraction);

  std::string id;
  double area_fraction;
  double crime_fraction;
};

/// Sum of crime fractions; throws on an empty set or a sum above one.
double hit_rate(std::span<const HotspotUnit> selected);
/// Sum of area fractions; same rules as hit_rate.
double coverage(std::span<const HotspotUnit> selected);

/// Events in flagged cells of the selection's period.
std::size_t hits(const HotspotSelection& sel, const EventSet& events);
/// Event-level hit rate n/N for the selection's period; throws when N = 0.
double hit_rate(const HotspotSelection& sel, const EventSet& events);
/// Flagged area over total area.
double coverage(const GridSpec& grid, const HotspotSelection& sel);

double pai(double hit, double cov);

/// hit / cov^alpha. alpha = 0 gives the hit rate and alpha = 1 the PAI,
/// both bit-for-bit.
double ppai(double hit, double cov, double alpha);

/// Successfully predicted events per km2 searched.
double ser(std::size_t hits, double patrolled_area_km2);

struct AlsOptions {
  /// Only events in these cells count (and N shrinks accordingly).
  const HotspotSelection* restrict_to = nullptr;
  /// When set, masses below the floor are replaced by it. When unset a
  /// zero mass at an event cell is an error.
  std::optional<double> floor;

  static constexpr double kDefaultFloor = 1e-12;
};

/// Base of the logarithm used by als().
inline constexpr const char* kAlsLogBase = "e";

/// Mean natural log of the surface mass at each in-scope event of `period`.
double als(const ProbabilitySurface& surface, const EventSet& events,
           PeriodId period, const AlsOptions& options = {});

}  // namespace hseval
