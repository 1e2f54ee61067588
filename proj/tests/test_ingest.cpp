#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hseval/error.hpp"
#include "hseval/ingest.hpp"
#include "support.hpp"

using namespace hseval;
using testing::fixture;
using testing::TempDir;
using testing::write_file;

namespace {

template <class F>
ParseError expect_parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, "", "");
}

}  // namespace

TEST_CASE("minimal cell dataset") {
  DatasetPaths p;
  p.cells = fixture("cells4.csv");
  p.events = fixture("events4.csv");
  p.selections = fixture("selections4.csv");
  p.surfaces = fixture("surfaces4.csv");
  const auto ds = load_dataset(p, {});
  REQUIRE(ds.cells);
  CHECK(ds.cells->grid.size() == 4);
  CHECK(ds.cells->events.size() == 5);
  CHECK(ds.model_ids() == std::vector<ModelId>{"m"});
  CHECK(ds.cells->models.at("m").selections.size() == 2);
  CHECK(ds.cells->models.at("m").surfaces.size() == 2);
  CHECK(ds.warnings.empty());
}

TEST_CASE("unknown cell in events names the line") {
  TempDir dir("ingest");
  write_file(dir / "events.csv",
             "event_id,cell_id,period_id\ne1,c1,1\n\ne2,c9,1\n");
  const GridSpec g = load_grid(fixture("cells4.csv"));
  const auto e = expect_parse_error(
      [&] { load_events(dir / "events.csv", g, true); });
  CHECK(e.line() == 4);
  CHECK(e.field() == "cell_id");
  CHECK(std::string(e.what()).find("e2") != std::string::npos);

  const auto lenient = load_events(dir / "events.csv", g, false);
  CHECK(lenient.events.size() == 1);
  CHECK(lenient.dropped == 1);
}

TEST_CASE("malformed rows") {
  TempDir dir("ingest");
  const GridSpec g = load_grid(fixture("cells4.csv"));

  write_file(dir / "bad_header.csv", "cell,area\nc1,1\n");
  CHECK_THROWS_AS(load_grid(dir / "bad_header.csv"), ParseError);

  write_file(dir / "bad_area.csv", "cell_id,area_km2\nc1,1\nc2,abc\n");
  const auto area = expect_parse_error([&] { load_grid(dir / "bad_area.csv"); });
  CHECK(area.line() == 3);
  CHECK(area.field() == "area_km2");

  write_file(dir / "short.csv", "cell_id,area_km2\nc1\n");
  CHECK(expect_parse_error([&] { load_grid(dir / "short.csv"); }).line() == 2);

  write_file(dir / "period.csv", "event_id,cell_id,period_id\ne1,c1,1.5\n");
  CHECK(expect_parse_error([&] { load_events(dir / "period.csv", g); })
            .field() == "period_id");

  write_file(dir / "dup_event.csv",
             "event_id,cell_id,period_id\ne1,c1,1\ne1,c2,1\n");
  CHECK(expect_parse_error([&] { load_events(dir / "dup_event.csv", g); })
            .line() == 3);

  write_file(dir / "dup_sel.csv",
             "model_id,period_id,cell_id\nm,1,c1\nm,1,c1\n");
  CHECK(expect_parse_error([&] { load_selections(dir / "dup_sel.csv", g); })
            .line() == 3);

  write_file(dir / "surf.csv",
             "model_id,period_id,cell_id,probability\n"
             "m,1,c1,0.5\nm,1,c2,0.5\nm,1,c3,0.5\nm,1,c4,0.5\n");
  const auto surf =
      expect_parse_error([&] { load_surfaces(dir / "surf.csv", g); });
  CHECK(surf.line() == 2);
  CHECK(surf.field() == "probability");
  const auto fixed = load_surfaces(dir / "surf.csv", g, {true, true});
  CHECK(fixed.at("m").at({1}).mass_at({"c1"}) == doctest::Approx(0.25));

  write_file(dir / "dup_surf.csv",
             "model_id,period_id,cell_id,probability\nm,1,c1,0.5\nm,1,c1,0.5\n");
  CHECK(expect_parse_error([&] { load_surfaces(dir / "dup_surf.csv", g); })
            .line() == 3);

  CHECK_THROWS_AS(load_grid(dir / "missing.csv"), ParseError);
}

TEST_CASE("comments, blank lines and whitespace") {
  TempDir dir("ingest");
  write_file(dir / "cells.csv",
             "# study region\ncell_id, area_km2\n\n c1 , 2\n# c2 is gone\nc3,1\n");
  const auto g = load_grid(dir / "cells.csv");
  CHECK(g.size() == 2);
  CHECK(g.at({"c1"}).area_km2 == 2.0);
}

TEST_CASE("worked unit table") {
  const auto units = load_units(fixture("worked_units.csv"));
  REQUIRE(units.size() == 15);
  CHECK(hit_rate(units) == doctest::Approx(0.83));
  CHECK(coverage(units) == doctest::Approx(0.42));

  const auto sels = load_unit_selections(fixture("worked_models.csv"), units);
  CHECK(sels.size() == 4);
  CHECK(sels.at("M-III").at({1}).size() == 4);

  TempDir dir("ingest");
  write_file(dir / "sel.csv", "model_id,period_id,cell_id\nm,1,99\n");
  CHECK_THROWS_AS(load_unit_selections(dir / "sel.csv", units), ParseError);
}

TEST_CASE("rates file") {
  const auto r = load_rates(fixture("worked_rates.csv"));
  REQUIRE(r.size() == 2);
  CHECK(r.at("A").p_tp_given_pos == 0.85);
  CHECK(r.at("B").share_positive == 0.05);

  TempDir dir("ingest");
  write_file(dir / "rates.csv",
             "model_id,p_tp_given_pos,p_fp_given_pos,p_tn_given_neg,"
             "p_fn_given_neg,share_positive\nA,0.8,0.3,0.5,0.5,0.1\n");
  CHECK(expect_parse_error([&] { load_rates(dir / "rates.csv"); }).line() == 2);
}

TEST_CASE("load, write, load is a fixed point") {
  GeneratorSpec spec;
  spec.cell_count = 17;
  spec.period_count = 3;
  spec.events_per_period = 40;
  const auto grid = make_grid(spec);
  const auto events = generate_events(spec);
  Rng rng(99);
  SelectionsByModel sels;
  SurfacesByModel surfs;
  for (std::int64_t p = 0; p < 3; ++p) {
    sels["r"].emplace(PeriodId{p}, random_selection(grid, 5, {p}, rng));
    std::map<CellId, double> m;
    for (const auto& c : grid.cells()) m[c.id] = 0.01 + rng.uniform01();
    surfs["s"].emplace(PeriodId{p}, ProbabilitySurface(grid, {p}, m, true));
  }

  TempDir dir("roundtrip");
  auto dump = [&](const std::string& name, auto writer) {
    std::ostringstream out;
    writer(out);
    write_file(dir / name, out.str());
    return out.str();
  };
  const auto t_cells = dump("cells.csv", [&](auto& o) { write_grid(o, grid); });
  const auto t_events =
      dump("events.csv", [&](auto& o) { write_events(o, events); });
  const auto t_sels =
      dump("sels.csv", [&](auto& o) { write_selections(o, sels); });
  const auto t_surfs =
      dump("surfs.csv", [&](auto& o) { write_surfaces(o, surfs); });

  const auto g2 = load_grid(dir / "cells.csv");
  const auto e2 = load_events(dir / "events.csv", g2).events;
  const auto s2 = load_selections(dir / "sels.csv", g2);
  const auto f2 = load_surfaces(dir / "surfs.csv", g2);

  CHECK(g2.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(g2.cells()[i].id == grid.cells()[i].id);
    CHECK(g2.cells()[i].area_km2 == grid.cells()[i].area_km2);
  }
  CHECK(std::equal(e2.events().begin(), e2.events().end(),
                   events.events().begin(), events.events().end()));
  for (const auto& [p, sel] : sels.at("r")) {
    CHECK(s2.at("r").at(p).flagged() == sel.flagged());
  }
  for (const auto& [p, surf] : surfs.at("s")) {
    for (const auto& [c, m] : surf.mass()) {
      CHECK(std::abs(f2.at("s").at(p).mass_at(c) - m) <= 1e-12);
    }
  }

  std::ostringstream again;
  write_surfaces(again, f2);
  CHECK(again.str() == t_surfs);
  std::ostringstream again_events;
  write_events(again_events, e2);
  CHECK(again_events.str() == t_events);

  const auto units = load_units(fixture("worked_units.csv"));
  std::ostringstream u1;
  write_units(u1, units);
  write_file(dir / "units.csv", u1.str());
  const auto units2 = load_units(dir / "units.csv");
  REQUIRE(units2.size() == units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    CHECK(units2[i].id == units[i].id);
    CHECK(units2[i].area_fraction == units[i].area_fraction);
    CHECK(units2[i].crime_fraction == units[i].crime_fraction);
  }
}

TEST_CASE("format_number round trips") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng);
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.25) == "0.25");
}

TEST_CASE("config defaults") {
  const auto cfg = parse_config("");
  CHECK(cfg.measures ==
        std::vector<MeasureId>{"hit_rate", "coverage", "precision", "pai", "ppai"});
  CHECK(cfg.alpha_mode == AlphaMode::hit_rate);
  CHECK(cfg.target_coverage == 0.02);
  CHECK(cfg.grid_step == 0.01);
  CHECK(cfg.utilities.u_fp == -0.5);
  CHECK_FALSE(cfg.weights.has_value());
  CHECK(cfg.compare_method == CompareMethod::expected_utility);
  CHECK(cfg.strict);
  CHECK_FALSE(cfg.als_floor);
  CHECK(cfg.orientation_of("coverage") == Orientation::lower_is_better);
  CHECK(cfg.orientation_of("pai") == Orientation::higher_is_better);

  const auto echo = cfg.echo();
  CHECK(std::is_sorted(echo.begin(), echo.end(),
                       [](auto& a, auto& b) { return a.first < b.first; }));
  bool has_alpha_mode = false;
  for (const auto& [k, v] : echo) {
    if (k == "ppai.alpha_mode") has_alpha_mode = v == "hit_rate";
  }
  CHECK(has_alpha_mode);
}

TEST_CASE("config parsing") {
  const auto w = parse_config("weights.hit_rate = 0.7\nweights.precision = 0.3\n");
  REQUIRE(w.weights.has_value());
  CHECK(w.weights->weights().at("hit_rate") == 0.7);
  CHECK(w.compare_method == CompareMethod::both);

  CHECK_THROWS_AS(
      parse_config("weights.hit_rate = 0.7\nweights.precision = 0.4\n"), Error);
  CHECK_THROWS_AS(parse_config("ppai.alpha = 1.5\n"), Error);
  CHECK_THROWS_AS(parse_config("ppai.alpha = -0.1\n"), Error);
  CHECK_THROWS_AS(parse_config("ppai.target_coverage = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("measures = hit_rate,bogus\n"), Error);
  CHECK_THROWS_AS(parse_config("sparkle = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("strict = false\nstrict = true\n"), ParseError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ParseError);

  std::vector<std::string> warnings;
  const auto lenient = parse_config("sparkle = 1\n", "x", false, &warnings);
  CHECK_FALSE(lenient.strict);
  CHECK(warnings.size() == 1);
  CHECK_NOTHROW(parse_config("strict = false\nsparkle = 1\n"));

  const auto nn = parse_config("ppai.alpha_mode = n/N\n");
  CHECK(nn.alpha_mode == AlphaMode::hit_rate);
  const auto fixed = parse_config("ppai.alpha_mode = fixed\nppai.alpha = 0.9\n");
  CHECK(fixed.alpha_mode == AlphaMode::fixed);
  CHECK(fixed.alpha == 0.9);

  const auto e = expect_parse_error(
      [] { parse_config("# c\nmeasures = pai\nppai.alpha = x\n", "run.cfg"); });
  CHECK(e.file() == "run.cfg");
  CHECK(e.line() == 3);
  CHECK(e.field() == "ppai.alpha");

  const auto gen = parse_config(
      "gen.cells = 5\ngen.weights = 1,2,3,4,5\ngen.seed = 9\ngen.top_k = 2\n");
  CHECK(gen.generator.cell_count == 5);
  CHECK(gen.generator.weights.size() == 5);
  CHECK(gen.generator.seed == 9);
  CHECK(gen.gen_top_k == 2);

  const auto loaded = load_config(fixture("compare_weighted.cfg"));
  CHECK(loaded.compare_method == CompareMethod::weighted);
}
