// hseval: batch evaluation of gridded hotspot prediction models.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hseval/commands.hpp"
#include "hseval/error.hpp"
#include "hseval/ingest.hpp"

namespace fs = std::filesystem;
using namespace hseval;

namespace {

struct Options {
  std::string cells, events, selections, surfaces, units, rates;
  std::string config;
  std::string out;
  std::string tables;
  std::optional<bool> strict;
  std::optional<std::uint64_t> seed;
  std::optional<double> target;
};

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

RunConfig read_config(const Options& o, std::vector<std::string>& warnings) {
  if (o.config.empty()) {
    RunConfig cfg;
    if (o.strict) cfg.strict = *o.strict;
    return cfg;
  }
  return load_config(o.config, o.strict, &warnings);
}

Dataset read_dataset(const Options& o, const RunConfig& cfg) {
  DatasetPaths paths{opt_path(o.cells),    opt_path(o.events),
                     opt_path(o.selections), opt_path(o.surfaces),
                     opt_path(o.units),    opt_path(o.rates)};
  return load_dataset(paths, {cfg.strict, cfg.renormalize});
}

void emit(const Report& report, const Options& o,
          const std::vector<std::string>& config_warnings) {
  Report r = report;
  r.warnings.insert(r.warnings.begin(), config_warnings.begin(),
                    config_warnings.end());
  const std::string text = r.render();
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + o.out);
    out << text;
  }
  if (!o.tables.empty()) r.write_tables(o.tables);
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Run configuration (key = value)");
  cmd->add_option("--out", o.out, "Report file (default: stdout)");
  cmd->add_option("--tables", o.tables,
                  "Also write each report table as <dir>/<table>.csv");
  cmd->add_flag_callback("--strict", [&o] { o.strict = true; },
                         "Reject unknown ids and config keys (default)");
  cmd->add_flag_callback("--lenient", [&o] { o.strict = false; },
                         "Drop rows with unknown ids, warn on unknown keys");
}

void add_inputs(CLI::App* cmd, Options& o) {
  cmd->add_option("--cells", o.cells, "cell_id,area_km2");
  cmd->add_option("--events", o.events, "event_id,cell_id,period_id");
  cmd->add_option("--selections", o.selections, "model_id,period_id,cell_id");
  cmd->add_option("--surfaces", o.surfaces,
                  "model_id,period_id,cell_id,probability");
  cmd->add_option("--units", o.units, "unit_id,area_fraction,crime_fraction");
  cmd->add_option("--rates", o.rates,
                  "model_id,p_tp_given_pos,p_fp_given_pos,p_tn_given_neg,"
                  "p_fn_given_neg,share_positive");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accuracy and efficiency measures for hotspot prediction models"};
  app.require_subcommand(1);
  app.set_version_flag(
      "--version",
      std::string("hseval ") + kToolVersion + " (report format " +
          std::to_string(kReportFormatVersion) + ", input format " +
          std::to_string(kInputFormatVersion) + ")");

  Options o;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score every model per period");
  add_inputs(evaluate_cmd, o);
  add_common(evaluate_cmd, o);

  auto* compare_cmd = app.add_subcommand(
      "compare", "Combine measures and test model differences across periods");
  add_inputs(compare_cmd, o);
  add_common(compare_cmd, o);

  auto* alpha_cmd = app.add_subcommand(
      "optimize-alpha", "Grid-search the PPAI exponent for a target coverage");
  alpha_cmd->add_option("--units", o.units, "unit_id,area_fraction,crime_fraction")
      ->required();
  alpha_cmd->add_option("--target", o.target,
                        "Target cumulative coverage (default ppai.target_coverage)");
  add_common(alpha_cmd, o);

  auto* gen_cmd = app.add_subcommand("gen", "Write a seeded synthetic dataset");
  gen_cmd->add_option("--seed", o.seed, "Overrides gen.seed");
  add_common(gen_cmd, o);
  gen_cmd->get_option("--out")->description("Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> config_warnings;
    RunConfig cfg = read_config(o, config_warnings);

    if (evaluate_cmd->parsed()) {
      const Dataset ds = read_dataset(o, cfg);
      emit(evaluate_report(evaluate(ds, cfg), cfg), o, config_warnings);
    } else if (compare_cmd->parsed()) {
      const Dataset ds = read_dataset(o, cfg);
      emit(compare_report(compare(ds, cfg), cfg), o, config_warnings);
    } else if (alpha_cmd->parsed()) {
      const double target = o.target.value_or(cfg.target_coverage);
      auto result =
          optimize_alpha(load_units(o.units), target, cfg.grid_step);
      emit(optimize_alpha_report(result, cfg), o, config_warnings);
    } else if (gen_cmd->parsed()) {
      if (o.seed) cfg.generator.seed = *o.seed;
      const auto data = generate_dataset(cfg);
      write_dataset(data, o.out);
      Options to_stdout = o;
      to_stdout.out.clear();
      emit(gen_report(data, cfg, o.out), to_stdout, config_warnings);
    }
  } catch (const AlphaSearchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "alpha,peak_prefix_len\n";
    for (const auto& d : e.diagnostics()) {
      std::cerr << report_number(d.alpha) << ',' << d.peak_prefix_len << '\n';
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
