#include "hseval/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// A header-checked delimiter-separated table.
class Table {
 public:
  Table(const std::filesystem::path& path,
        std::vector<std::string_view> header)
      : file_(path.string()), header_(std::move(header)) {
    std::ifstream in(path);
    if (!in) throw ParseError(file_, 0, "", "cannot open file");
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      auto fields = split(t, ',');
      if (!have_header) {
        check_header(fields, line_no);
        have_header = true;
        continue;
      }
      if (fields.size() != header_.size()) {
        throw ParseError(file_, line_no, "",
                         fmt::format("expected {} fields, found {}",
                                     header_.size(), fields.size()));
      }
      rows_.push_back({line_no, std::move(fields)});
    }
    if (!have_header) throw ParseError(file_, 0, "", "missing header row");
  }

  const std::string& file() const noexcept { return file_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  const std::string& text(const Row& row, std::size_t col) const {
    const auto& v = row.fields[col];
    if (v.empty()) fail(row, col, "empty value");
    return v;
  }

  double real(const Row& row, std::size_t col) const {
    const auto& v = text(row, col);
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
      fail(row, col, fmt::format("'{}' is not a finite number", v));
    }
    return out;
  }

  std::int64_t integer(const Row& row, std::size_t col) const {
    const auto& v = text(row, col);
    std::int64_t out = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
      fail(row, col, fmt::format("'{}' is not an integer", v));
    }
    return out;
  }

  [[noreturn]] void fail(const Row& row, std::size_t col,
                         const std::string& reason) const {
    throw ParseError(file_, row.line,
                     col < header_.size() ? std::string(header_[col]) : "",
                     reason);
  }

 private:
  void check_header(const std::vector<std::string>& fields,
                    std::size_t line_no) const {
    bool ok = fields.size() == header_.size();
    for (std::size_t i = 0; ok && i < fields.size(); ++i) {
      ok = fields[i] == header_[i];
    }
    if (!ok) {
      std::string expected;
      for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) expected += ',';
        expected += header_[i];
      }
      throw ParseError(file_, line_no, "",
                       fmt::format("header must be '{}'", expected));
    }
  }

  std::string file_;
  std::vector<std::string_view> header_;
  std::vector<Row> rows_;
};

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

GridSpec load_grid(const std::filesystem::path& path) {
  Table table(path, {"cell_id", "area_km2"});
  std::vector<Cell> cells;
  std::set<std::string> seen;
  for (const auto& row : table.rows()) {
    const auto& id = table.text(row, 0);
    const double area = table.real(row, 1);
    if (!seen.insert(id).second) {
      table.fail(row, 0, fmt::format("duplicate cell id '{}'", id));
    }
    if (!(area > 0.0)) table.fail(row, 1, "area must be positive");
    cells.push_back({CellId{id}, area});
  }
  if (cells.empty()) throw ParseError(table.file(), 0, "", "no cells");
  return GridSpec(std::move(cells));
}

LoadedEvents load_events(const std::filesystem::path& path,
                         const GridSpec& grid, bool strict) {
  Table table(path, {"event_id", "cell_id", "period_id"});
  std::vector<Event> kept;
  std::set<std::string> seen;
  LoadedEvents out;
  for (const auto& row : table.rows()) {
    Event e{table.text(row, 0), CellId{table.text(row, 1)},
            PeriodId{table.integer(row, 2)}};
    if (!seen.insert(e.id).second) {
      table.fail(row, 0, fmt::format("duplicate event id '{}'", e.id));
    }
    if (!grid.contains(e.cell)) {
      if (strict) {
        table.fail(row, 1, fmt::format("event '{}' references unknown cell '{}'",
                                       e.id, e.cell.value));
      }
      ++out.dropped;
      continue;
    }
    kept.push_back(std::move(e));
  }
  out.events = assign_events(grid, std::move(kept), true).events;
  return out;
}

SelectionsByModel load_selections(const std::filesystem::path& path,
                                  const GridSpec& grid, bool strict,
                                  std::size_t* dropped) {
  Table table(path, {"model_id", "period_id", "cell_id"});
  std::map<ModelId, std::map<PeriodId, std::vector<CellId>>> flagged;
  std::set<std::tuple<std::string, std::int64_t, std::string>> seen;
  std::size_t n_dropped = 0;
  for (const auto& row : table.rows()) {
    const auto& model = table.text(row, 0);
    const PeriodId period{table.integer(row, 1)};
    const auto& cell = table.text(row, 2);
    if (!seen.emplace(model, period.value, cell).second) {
      table.fail(row, 2,
                 fmt::format("duplicate prediction for model '{}', period {}, "
                             "cell '{}'",
                             model, period.value, cell));
    }
    if (!grid.contains(CellId{cell})) {
      if (strict) table.fail(row, 2, fmt::format("unknown cell '{}'", cell));
      ++n_dropped;
      continue;
    }
    flagged[model][period].push_back(CellId{cell});
  }
  if (dropped) *dropped = n_dropped;
  SelectionsByModel out;
  for (auto& [model, periods] : flagged) {
    for (auto& [period, cells] : periods) {
      out[model].emplace(period, HotspotSelection(grid, period, cells));
    }
  }
  return out;
}

SurfacesByModel load_surfaces(const std::filesystem::path& path,
                              const GridSpec& grid,
                              const LoadOptions& options) {
  Table table(path, {"model_id", "period_id", "cell_id", "probability"});
  struct Group {
    const Row* first = nullptr;
    std::map<CellId, double> mass;
  };
  std::map<ModelId, std::map<PeriodId, Group>> groups;
  for (const auto& row : table.rows()) {
    const auto& model = table.text(row, 0);
    const PeriodId period{table.integer(row, 1)};
    const CellId cell{table.text(row, 2)};
    const double p = table.real(row, 3);
    if (!grid.contains(cell)) {
      table.fail(row, 2, fmt::format("unknown cell '{}'", cell.value));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      table.fail(row, 3, fmt::format("probability {} is outside [0,1]", p));
    }
    auto& g = groups[model][period];
    if (!g.first) g.first = &row;
    if (!g.mass.emplace(cell, p).second) {
      table.fail(row, 2,
                 fmt::format("duplicate prediction for model '{}', period {}, "
                             "cell '{}'",
                             model, period.value, cell.value));
    }
  }
  SurfacesByModel out;
  for (auto& [model, periods] : groups) {
    for (auto& [period, g] : periods) {
      try {
        out[model].emplace(period, ProbabilitySurface(grid, period, g.mass,
                                                      options.renormalize));
      } catch (const Error& e) {
        table.fail(*g.first, 3,
                   fmt::format("model '{}': {}", model, e.what()));
      }
    }
  }
  return out;
}

std::vector<HotspotUnit> load_units(const std::filesystem::path& path) {
  Table table(path, {"unit_id", "area_fraction", "crime_fraction"});
  std::vector<HotspotUnit> units;
  std::set<std::string> seen;
  for (const auto& row : table.rows()) {
    const auto& id = table.text(row, 0);
    const double area = table.real(row, 1);
    const double crime = table.real(row, 2);
    if (!seen.insert(id).second) {
      table.fail(row, 0, fmt::format("duplicate unit id '{}'", id));
    }
    if (!(area > 0.0 && area <= 1.0)) {
      table.fail(row, 1, "area fraction must lie in (0,1]");
    }
    if (!(crime >= 0.0 && crime <= 1.0)) {
      table.fail(row, 2, "crime fraction must lie in [0,1]");
    }
    units.emplace_back(id, area, crime);
  }
  if (units.empty()) throw ParseError(table.file(), 0, "", "no units");
  return units;
}

UnitSelections load_unit_selections(const std::filesystem::path& path,
                                    const std::vector<HotspotUnit>& units) {
  Table table(path, {"model_id", "period_id", "cell_id"});
  std::set<std::string> known;
  for (const auto& u : units) known.insert(u.id);
  std::set<std::tuple<std::string, std::int64_t, std::string>> seen;
  UnitSelections out;
  for (const auto& row : table.rows()) {
    const auto& model = table.text(row, 0);
    const PeriodId period{table.integer(row, 1)};
    const auto& unit = table.text(row, 2);
    if (!known.contains(unit)) {
      table.fail(row, 2, fmt::format("unknown unit '{}'", unit));
    }
    if (!seen.emplace(model, period.value, unit).second) {
      table.fail(row, 2,
                 fmt::format("duplicate prediction for model '{}', period {}, "
                             "unit '{}'",
                             model, period.value, unit));
    }
    out[model][period].push_back(unit);
  }
  return out;
}

std::map<ModelId, LabelConditionalRates> load_rates(
    const std::filesystem::path& path) {
  Table table(path, {"model_id", "p_tp_given_pos", "p_fp_given_pos",
                     "p_tn_given_neg", "p_fn_given_neg", "share_positive"});
  std::map<ModelId, LabelConditionalRates> out;
  for (const auto& row : table.rows()) {
    const auto& model = table.text(row, 0);
    double v[5];
    for (std::size_t i = 0; i < 5; ++i) v[i] = table.real(row, i + 1);
    try {
      if (!out.emplace(model, LabelConditionalRates(v[0], v[1], v[2], v[3],
                                                    v[4]))
               .second) {
        table.fail(row, 0, fmt::format("duplicate model '{}'", model));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      table.fail(row, 1, e.what());
    }
  }
  return out;
}

void write_grid(std::ostream& out, const GridSpec& grid) {
  out << "cell_id,area_km2\n";
  for (const auto& c : grid.cells()) {
    out << c.id.value << ',' << format_number(c.area_km2) << '\n';
  }
}

void write_events(std::ostream& out, const EventSet& events) {
  out << "event_id,cell_id,period_id\n";
  for (const auto& e : events.events()) {
    out << e.id << ',' << e.cell.value << ',' << e.period.value << '\n';
  }
}

void write_selections(std::ostream& out, const SelectionsByModel& selections) {
  out << "model_id,period_id,cell_id\n";
  for (const auto& [model, periods] : selections) {
    for (const auto& [period, sel] : periods) {
      for (const auto& cell : sel.flagged()) {
        out << model << ',' << period.value << ',' << cell.value << '\n';
      }
    }
  }
}

void write_surfaces(std::ostream& out, const SurfacesByModel& surfaces) {
  out << "model_id,period_id,cell_id,probability\n";
  for (const auto& [model, periods] : surfaces) {
    for (const auto& [period, surface] : periods) {
      for (const auto& [cell, m] : surface.mass()) {
        out << model << ',' << period.value << ',' << cell.value << ','
            << format_number(m) << '\n';
      }
    }
  }
}

void write_units(std::ostream& out, const std::vector<HotspotUnit>& units) {
  out << "unit_id,area_fraction,crime_fraction\n";
  for (const auto& u : units) {
    out << u.id << ',' << format_number(u.area_fraction) << ','
        << format_number(u.crime_fraction) << '\n';
  }
}

std::vector<ModelId> Dataset::model_ids() const {
  std::set<ModelId> ids;
  if (cells) {
    for (const auto& [m, p] : cells->models) ids.insert(m);
  }
  if (units) {
    for (const auto& [m, p] : units->selections) ids.insert(m);
  }
  for (const auto& [m, r] : rates) ids.insert(m);
  return {ids.begin(), ids.end()};
}

Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options) {
  Dataset ds;
  if (paths.cells || paths.events || paths.surfaces ||
      (paths.selections && !paths.units)) {
    if (!paths.cells) throw Error("dataset: a cells file is required");
    if (!paths.events) throw Error("dataset: an events file is required");
    GridSpec grid = load_grid(*paths.cells);
    auto loaded = load_events(*paths.events, grid, options.strict);
    if (loaded.dropped > 0) {
      ds.warnings.push_back(fmt::format(
          "{}: dropped {} event(s) referencing unknown cells",
          paths.events->string(), loaded.dropped));
    }
    CellDataset cd{std::move(grid), std::move(loaded.events), {}};
    if (paths.selections) {
      std::size_t dropped = 0;
      auto sels = load_selections(*paths.selections, cd.grid, options.strict,
                                  &dropped);
      if (dropped > 0) {
        ds.warnings.push_back(fmt::format(
            "{}: dropped {} selection row(s) referencing unknown cells",
            paths.selections->string(), dropped));
      }
      for (auto& [model, periods] : sels) {
        cd.models[model].selections = std::move(periods);
      }
    }
    if (paths.surfaces) {
      auto surfs = load_surfaces(*paths.surfaces, cd.grid, options);
      for (auto& [model, periods] : surfs) {
        cd.models[model].surfaces = std::move(periods);
      }
    }
    ds.cells = std::move(cd);
  }
  if (paths.units) {
    UnitDataset ud{load_units(*paths.units), {}};
    if (paths.selections && !paths.cells) {
      ud.selections = load_unit_selections(*paths.selections, ud.units);
    }
    ds.units = std::move(ud);
  }
  if (paths.rates) ds.rates = load_rates(*paths.rates);
  if (ds.model_ids().empty()) throw Error("dataset: no models found");
  return ds;
}

// ---------------------------------------------------------------------------
// Run configuration

const std::vector<MeasureId>& known_measures() {
  static const std::vector<MeasureId> measures{
      "hit_rate",    "coverage",    "pai",         "ppai",
      "ser",         "precision",   "sensitivity", "specificity",
      "npv",         "accuracy",    "fpr",         "als",
      "als_hotspot", "expected_utility"};
  return measures;
}

Orientation default_orientation(const MeasureId& measure) {
  if (measure == "coverage" || measure == "fpr") {
    return Orientation::lower_is_better;
  }
  return Orientation::higher_is_better;
}

RunConfig::RunConfig() {
  for (const auto& m : known_measures()) {
    orientation.emplace(m, default_orientation(m));
  }
}

Orientation RunConfig::orientation_of(const MeasureId& measure) const {
  auto it = orientation.find(measure);
  return it == orientation.end() ? default_orientation(measure) : it->second;
}

std::string to_string(AlphaMode mode) {
  switch (mode) {
    case AlphaMode::fixed: return "fixed";
    case AlphaMode::hit_rate: return "hit_rate";
    case AlphaMode::grid_search: return "grid_search";
  }
  return "?";
}

std::string to_string(AggregateTransform transform) {
  switch (transform) {
    case AggregateTransform::raw: return "raw";
    case AggregateTransform::standardize: return "standardize";
    case AggregateTransform::rank: return "rank";
  }
  return "?";
}

std::string to_string(CompareMethod method) {
  switch (method) {
    case CompareMethod::expected_utility: return "expected_utility";
    case CompareMethod::weighted: return "weighted";
    case CompareMethod::both: return "both";
  }
  return "?";
}

std::string to_string(Orientation orientation) {
  return orientation == Orientation::higher_is_better ? "higher" : "lower";
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo(
    bool include_generator) const {
  std::map<std::string, std::string> kv;
  std::string list;
  for (const auto& m : measures) list += (list.empty() ? "" : ",") + m;
  kv["measures"] = list;
  kv["ppai.alpha_mode"] = to_string(alpha_mode);
  kv["ppai.alpha"] = format_number(alpha);
  kv["ppai.target_coverage"] = format_number(target_coverage);
  kv["ppai.grid_step"] = format_number(grid_step);
  kv["eu.u_tp"] = format_number(utilities.u_tp);
  kv["eu.u_fp"] = format_number(utilities.u_fp);
  kv["eu.u_tn"] = format_number(utilities.u_tn);
  kv["eu.u_fn"] = format_number(utilities.u_fn);
  if (weights) {
    for (const auto& [m, w] : weights->weights()) {
      kv["weights." + m] = format_number(w);
    }
  }
  for (const auto& [m, o] : orientation) kv["orientation." + m] = to_string(o);
  kv["aggregate.transform"] = to_string(transform);
  kv["compare.method"] = to_string(compare_method);
  kv["als.floor"] = als_floor ? "on" : "off";
  kv["als.floor_value"] = format_number(als_floor_value);
  kv["als.log_base"] = kAlsLogBase;
  kv["surface.renormalize"] = renormalize ? "true" : "false";
  kv["strict"] = strict ? "true" : "false";
  kv["stats.significance"] = format_number(significance);
  if (include_generator) {
    kv["gen.cells"] = std::to_string(generator.cell_count);
    kv["gen.cell_area"] = format_number(generator.cell_area_km2);
    std::string w;
    for (double x : generator.weights) w += (w.empty() ? "" : ",") + format_number(x);
    kv["gen.weights"] = w.empty() ? "harmonic" : w;
    kv["gen.periods"] = std::to_string(generator.period_count);
    kv["gen.events_per_period"] = std::to_string(generator.events_per_period);
    kv["gen.seed"] = std::to_string(generator.seed);
    kv["gen.top_k"] = std::to_string(gen_top_k);
    kv["gen.smoothing"] = format_number(gen_smoothing);
  }
  return {kv.begin(), kv.end()};
}

namespace {

struct ConfigLine {
  std::size_t line;
  std::string value;
};

class ConfigReader {
 public:
  ConfigReader(std::string source, std::map<std::string, ConfigLine> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  const ConfigLine* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  [[noreturn]] void fail(const std::string& key, const ConfigLine& at,
                         const std::string& reason) const {
    throw ParseError(source_, at.line, key, reason);
  }

  double real(const std::string& key, double fallback) {
    const auto* e = take(key);
    if (!e) return fallback;
    double out = 0.0;
    const auto* end = e->value.data() + e->value.size();
    auto [ptr, ec] = std::from_chars(e->value.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
      fail(key, *e, fmt::format("'{}' is not a finite number", e->value));
    }
    return out;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const auto* e = take(key);
    if (!e) return fallback;
    std::uint64_t out = 0;
    const auto* end = e->value.data() + e->value.size();
    auto [ptr, ec] = std::from_chars(e->value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
      fail(key, *e,
           fmt::format("'{}' is not a non-negative integer", e->value));
    }
    return out;
  }

  bool flag(const std::string& key, bool fallback) {
    const auto* e = take(key);
    if (!e) return fallback;
    const auto& v = e->value;
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    fail(key, *e, fmt::format("'{}' is not a boolean", v));
  }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
      if (!used_.contains(k)) out.push_back(k);
    }
    return out;
  }

  const std::map<std::string, ConfigLine>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, ConfigLine> entries_;
  std::set<std::string> used_;
};

bool is_known_measure(const std::string& m) {
  const auto& k = known_measures();
  return std::find(k.begin(), k.end(), m) != k.end();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source,
                       std::optional<bool> strict_override,
                       std::vector<std::string>* warnings) {
  std::map<std::string, ConfigLine> entries;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "", "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(source, line_no, "", "empty key");
    if (!entries.emplace(key, ConfigLine{line_no, value}).second) {
      throw ParseError(source, line_no, key, "duplicate key");
    }
  }

  ConfigReader r(source, std::move(entries));
  RunConfig cfg;
  cfg.strict = r.flag("strict", true);
  if (strict_override) cfg.strict = *strict_override;

  if (const auto* e = r.take("measures")) {
    cfg.measures.clear();
    if (!e->value.empty()) {
      for (auto& m : split(e->value, ',')) {
        if (!is_known_measure(m)) {
          r.fail("measures", *e, fmt::format("unknown measure '{}'", m));
        }
        if (std::find(cfg.measures.begin(), cfg.measures.end(), m) ==
            cfg.measures.end()) {
          cfg.measures.push_back(m);
        }
      }
    }
  }

  if (const auto* e = r.take("ppai.alpha_mode")) {
    if (e->value == "fixed") {
      cfg.alpha_mode = AlphaMode::fixed;
    } else if (e->value == "hit_rate" || e->value == "n/N") {
      cfg.alpha_mode = AlphaMode::hit_rate;
    } else if (e->value == "grid_search") {
      cfg.alpha_mode = AlphaMode::grid_search;
    } else {
      r.fail("ppai.alpha_mode", *e,
             "expected one of fixed, hit_rate, grid_search");
    }
  }
  cfg.alpha = r.real("ppai.alpha", cfg.alpha);
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    r.fail("ppai.alpha", r.entries().at("ppai.alpha"),
           "alpha must lie in [0,1]");
  }
  cfg.target_coverage = r.real("ppai.target_coverage", cfg.target_coverage);
  if (!(cfg.target_coverage > 0.0 && cfg.target_coverage < 1.0)) {
    r.fail("ppai.target_coverage", r.entries().at("ppai.target_coverage"),
           "target coverage must lie in (0,1)");
  }
  cfg.grid_step = r.real("ppai.grid_step", cfg.grid_step);
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 0.98)) {
    r.fail("ppai.grid_step", r.entries().at("ppai.grid_step"),
           "grid step must lie in (0, 0.98]");
  }

  cfg.utilities.u_tp = r.real("eu.u_tp", cfg.utilities.u_tp);
  cfg.utilities.u_fp = r.real("eu.u_fp", cfg.utilities.u_fp);
  cfg.utilities.u_tn = r.real("eu.u_tn", cfg.utilities.u_tn);
  cfg.utilities.u_fn = r.real("eu.u_fn", cfg.utilities.u_fn);

  std::map<MeasureId, double> weights;
  const ConfigLine* first_weight = nullptr;
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.entries()) keys.push_back(k);
  for (const auto& k : keys) {
    if (k.rfind("weights.", 0) == 0) {
      const auto measure = k.substr(8);
      const auto* e = r.take(k);
      if (!is_known_measure(measure)) {
        r.fail(k, *e, fmt::format("unknown measure '{}'", measure));
      }
      if (!first_weight) first_weight = e;
      weights[measure] = r.real(k, 0.0);
    } else if (k.rfind("orientation.", 0) == 0) {
      const auto measure = k.substr(12);
      const auto* e = r.take(k);
      if (!is_known_measure(measure)) {
        r.fail(k, *e, fmt::format("unknown measure '{}'", measure));
      }
      if (e->value == "higher") {
        cfg.orientation[measure] = Orientation::higher_is_better;
      } else if (e->value == "lower") {
        cfg.orientation[measure] = Orientation::lower_is_better;
      } else {
        r.fail(k, *e, "expected 'higher' or 'lower'");
      }
    }
  }
  if (!weights.empty()) {
    try {
      cfg.weights = WeightVector(weights);
    } catch (const Error& e) {
      r.fail("weights", *first_weight, e.what());
    }
  }

  if (const auto* e = r.take("aggregate.transform")) {
    if (e->value == "raw") {
      cfg.transform = AggregateTransform::raw;
    } else if (e->value == "standardize") {
      cfg.transform = AggregateTransform::standardize;
    } else if (e->value == "rank") {
      cfg.transform = AggregateTransform::rank;
    } else {
      r.fail("aggregate.transform", *e,
             "expected one of raw, standardize, rank");
    }
  }

  cfg.compare_method = cfg.weights ? CompareMethod::both
                                   : CompareMethod::expected_utility;
  if (const auto* e = r.take("compare.method")) {
    if (e->value == "expected_utility") {
      cfg.compare_method = CompareMethod::expected_utility;
    } else if (e->value == "weighted") {
      cfg.compare_method = CompareMethod::weighted;
    } else if (e->value == "both") {
      cfg.compare_method = CompareMethod::both;
    } else {
      r.fail("compare.method", *e,
             "expected one of expected_utility, weighted, both");
    }
  }

  cfg.als_floor = r.flag("als.floor", cfg.als_floor);
  cfg.als_floor_value = r.real("als.floor_value", cfg.als_floor_value);
  if (!(cfg.als_floor_value > 0.0)) {
    r.fail("als.floor_value", r.entries().at("als.floor_value"),
           "floor must be positive");
  }
  cfg.renormalize = r.flag("surface.renormalize", cfg.renormalize);
  cfg.significance = r.real("stats.significance", cfg.significance);
  if (!(cfg.significance > 0.0 && cfg.significance < 1.0)) {
    r.fail("stats.significance", r.entries().at("stats.significance"),
           "significance level must lie in (0,1)");
  }

  auto& g = cfg.generator;
  g.cell_count = r.count("gen.cells", g.cell_count);
  g.cell_area_km2 = r.real("gen.cell_area", g.cell_area_km2);
  if (const auto* e = r.take("gen.weights")) {
    g.weights.clear();
    for (const auto& w : split(e->value, ',')) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
      if (ec != std::errc() || ptr != w.data() + w.size()) {
        r.fail("gen.weights", *e, fmt::format("'{}' is not a number", w));
      }
      g.weights.push_back(x);
    }
  }
  g.period_count = r.count("gen.periods", g.period_count);
  g.events_per_period = r.count("gen.events_per_period", g.events_per_period);
  g.seed = r.count("gen.seed", g.seed);
  cfg.gen_top_k = r.count("gen.top_k", cfg.gen_top_k);
  cfg.gen_smoothing = r.real("gen.smoothing", cfg.gen_smoothing);

  for (const auto& k : r.unused()) {
    if (cfg.strict) {
      throw ParseError(source, r.entries().at(k).line, k, "unknown key");
    }
    if (warnings) {
      warnings->push_back(
          fmt::format("{}:{}: ignored unknown key '{}'", source,
                      r.entries().at(k).line, k));
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      std::optional<bool> strict_override,
                      std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string(), strict_override, warnings);
}

}  // namespace hseval
