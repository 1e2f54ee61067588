#include "hseval/commands.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "hseval/error.hpp"
#include "hseval/synth.hpp"

namespace hseval {

namespace {

constexpr const char* kAlphaMeasure = "ppai_alpha";

class WarningLog {
 public:
  void add(std::string w) {
    if (seen_.insert(w).second) out_.push_back(std::move(w));
  }
  std::vector<std::string> take() { return std::move(out_); }

 private:
  std::set<std::string> seen_;
  std::vector<std::string> out_;
};

std::vector<HotspotUnit> grid_units(const CellDataset& d, PeriodId period) {
  const std::size_t n = d.events.count(period);
  if (n == 0) {
    throw Error(fmt::format(
        "ppai grid search: no events in period {} to build cumulative levels",
        period.value));
  }
  const auto counts = d.events.counts_by_cell(period);
  std::vector<HotspotUnit> units;
  units.reserve(d.grid.size());
  for (const auto& c : d.grid.cells()) {
    auto it = counts.find(c.id);
    const std::size_t k = it == counts.end() ? 0 : it->second;
    units.emplace_back(c.id.value, c.area_km2 / d.grid.total_area(),
                       static_cast<double>(k) / static_cast<double>(n));
  }
  return units;
}

double search_alpha(std::vector<HotspotUnit> units, const RunConfig& cfg) {
  const auto ordered = order_units(std::move(units));
  const auto levels = cumulative_levels(ordered);
  return optimal_alpha(levels, cfg.target_coverage, cfg.grid_step).alpha_star;
}

/// Computes the measures of one (model, period) from cell-level data.
class CellEvaluator {
 public:
  CellEvaluator(const CellDataset& data, const RunConfig& cfg, WarningLog& log)
      : data_(data), cfg_(cfg), log_(log) {}

  MeasureValues run(const ModelId& model, PeriodId period,
                    const HotspotSelection* sel,
                    const ProbabilitySurface* surface) {
    model_ = &model;
    period_ = period;
    const std::size_t n = data_.events.count(period);
    if (n == 0) undefined_note("no events in this period");

    struct SelectionStats {
      ContingencyTable table;
      RateSet rates;
      std::size_t hits = 0;
      double flagged_area = 0.0;
      double cov = 0.0;
      Rate hit;
    };
    std::optional<SelectionStats> s;
    if (sel) {
      SelectionStats st;
      st.table = contingency(data_.grid, *sel, data_.events, period);
      st.rates = rates_from_contingency(st.table);
      st.hits = hits(*sel, data_.events);
      st.flagged_area = sel->flagged_area(data_.grid);
      st.cov = st.flagged_area / data_.grid.total_area();
      if (n > 0) st.hit = static_cast<double>(st.hits) / static_cast<double>(n);
      s = st;
    }

    MeasureValues out;
    for (const auto& m : cfg_.measures) {
      Rate v;
      const bool need_sel = m != "als";
      if (need_sel && !sel) {
        undefined(m, "model has no hotspot selection for this period");
        out[m] = v;
        continue;
      }
      if ((m == "als" || m == "als_hotspot") && !surface) {
        undefined(m, "model has no probability surface for this period");
        out[m] = v;
        continue;
      }
      if (m == "hit_rate") {
        v = s->hit;
      } else if (m == "coverage") {
        v = s->cov;
      } else if (m == "pai") {
        if (s->hit && s->cov > 0.0) {
          v = pai(*s->hit, s->cov);
        } else if (s->cov <= 0.0) {
          undefined(m, "nothing flagged");
        }
      } else if (m == "ppai") {
        Rate alpha = ppai_alpha(s->hit);
        out[kAlphaMeasure] = alpha;
        if (s->hit && alpha && s->cov > 0.0) {
          v = ppai(*s->hit, s->cov, *alpha);
        } else if (s->cov <= 0.0) {
          undefined(m, "nothing flagged");
        }
      } else if (m == "ser") {
        if (s->flagged_area > 0.0) {
          v = ser(s->hits, s->flagged_area);
        } else {
          undefined(m, "nothing flagged");
        }
      } else if (m == "precision") {
        v = s->rates.ppv;
      } else if (m == "sensitivity") {
        v = s->rates.sensitivity;
      } else if (m == "specificity") {
        v = s->rates.specificity;
        if (!v) undefined(m, "no event-free cells");
      } else if (m == "npv") {
        v = s->rates.npv;
        if (!v) undefined(m, "every cell is flagged");
      } else if (m == "accuracy") {
        v = s->rates.accuracy;
      } else if (m == "fpr") {
        v = s->rates.fpr;
        if (!v) undefined(m, "no event-free cells");
      } else if (m == "als" || m == "als_hotspot") {
        AlsOptions opts;
        if (cfg_.als_floor) opts.floor = cfg_.als_floor_value;
        if (m == "als_hotspot") opts.restrict_to = sel;
        std::size_t in_scope = n;
        if (m == "als_hotspot") in_scope = s->hits;
        if (in_scope > 0) {
          v = als(*surface, data_.events, period, opts);
        } else if (n > 0) {
          undefined(m, "no events inside the flagged cells");
        }
      } else if (m == "expected_utility") {
        const auto& t = s->table;
        if (t.tp + t.fp > 0 && t.tn + t.fn > 0) {
          v = expected_utility(conditional_rates(t), cfg_.utilities);
        } else {
          undefined(m, "one of the '+'/'-' labels has no cells");
        }
      } else {
        throw Error(fmt::format("evaluate: unknown measure '{}'", m));
      }
      out[m] = v;
    }
    return out;
  }

 private:
  Rate ppai_alpha(const Rate& hit) {
    switch (cfg_.alpha_mode) {
      case AlphaMode::fixed:
        return cfg_.alpha;
      case AlphaMode::hit_rate:
        return hit;
      case AlphaMode::grid_search: {
        if (!hit) return std::nullopt;
        auto it = grid_alpha_.find(period_);
        if (it == grid_alpha_.end()) {
          it = grid_alpha_
                   .emplace(period_,
                            search_alpha(grid_units(data_, period_), cfg_))
                   .first;
        }
        return it->second;
      }
    }
    return std::nullopt;
  }

  void undefined(const MeasureId& m, const std::string& why) {
    log_.add(fmt::format("model '{}' period {}: {} undefined ({})", *model_,
                         period_.value, m, why));
  }
  void undefined_note(const std::string& why) {
    log_.add(fmt::format("period {}: {}", period_.value, why));
  }

  const CellDataset& data_;
  const RunConfig& cfg_;
  WarningLog& log_;
  std::map<PeriodId, double> grid_alpha_;
  const ModelId* model_ = nullptr;
  PeriodId period_;
};

using Values = std::map<ModelId, std::map<PeriodId, MeasureValues>>;

Values evaluate_cells(const CellDataset& d, const RunConfig& cfg,
                      WarningLog& log) {
  Values values;
  CellEvaluator eval(d, cfg, log);
  for (const auto& [model, preds] : d.models) {
    std::set<PeriodId> periods;
    for (const auto& [p, s] : preds.selections) periods.insert(p);
    for (const auto& [p, s] : preds.surfaces) periods.insert(p);
    for (PeriodId p : periods) {
      auto sel = preds.selections.find(p);
      auto surf = preds.surfaces.find(p);
      values[model][p] = eval.run(
          model, p, sel == preds.selections.end() ? nullptr : &sel->second,
          surf == preds.surfaces.end() ? nullptr : &surf->second);
    }
  }
  return values;
}

Values evaluate_units(const UnitDataset& d, const RunConfig& cfg,
                      WarningLog& log) {
  std::map<std::string, const HotspotUnit*> by_id;
  for (const auto& u : d.units) by_id[u.id] = &u;
  std::optional<double> grid_alpha;

  Values values;
  for (const auto& [model, periods] : d.selections) {
    for (const auto& [period, ids] : periods) {
      std::vector<HotspotUnit> chosen;
      for (const auto& id : ids) chosen.push_back(*by_id.at(id));
      const double hit = hit_rate(chosen);
      const double cov = coverage(chosen);
      MeasureValues out;
      for (const auto& m : cfg.measures) {
        Rate v;
        if (m == "hit_rate") {
          v = hit;
        } else if (m == "coverage") {
          v = cov;
        } else if (m == "pai") {
          v = pai(hit, cov);
        } else if (m == "ppai") {
          double alpha = cfg.alpha;
          if (cfg.alpha_mode == AlphaMode::hit_rate) {
            alpha = hit;
          } else if (cfg.alpha_mode == AlphaMode::grid_search) {
            if (!grid_alpha) grid_alpha = search_alpha(d.units, cfg);
            alpha = *grid_alpha;
          }
          out[kAlphaMeasure] = alpha;
          v = ppai(hit, cov, alpha);
        } else {
          log.add(fmt::format(
              "model '{}': {} undefined (needs cell-level data, not units)",
              model, m));
        }
        out[m] = v;
      }
      values[model][period] = std::move(out);
    }
  }
  return values;
}

Values evaluate_rates(const std::map<ModelId, LabelConditionalRates>& rates,
                      const RunConfig& cfg, WarningLog& log) {
  Values values;
  for (const auto& [model, r] : rates) {
    MeasureValues out;
    for (const auto& m : cfg.measures) {
      Rate v;
      if (m == "hit_rate") {
        v = hit_rate_from_conditionals(r);
      } else if (m == "precision") {
        v = r.p_tp_given_pos;
      } else if (m == "npv") {
        v = r.p_tn_given_neg;
      } else if (m == "expected_utility") {
        v = expected_utility(r, cfg.utilities);
      } else {
        log.add(fmt::format(
            "model '{}': {} undefined (not available from outcome rates)",
            model, m));
      }
      out[m] = v;
    }
    values[model][PeriodId{0}] = std::move(out);
  }
  return values;
}

void merge(Values& into, Values from, const char* source) {
  for (auto& [model, periods] : from) {
    if (into.contains(model)) {
      throw Error(fmt::format(
          "evaluate: model '{}' appears in more than one input ({})", model,
          source));
    }
    into.emplace(model, std::move(periods));
  }
}

std::vector<std::pair<std::string, std::string>> base_header(
    const std::string& command, const RunConfig& cfg, bool with_generator) {
  std::vector<std::pair<std::string, std::string>> h{
      {"command", command},
      {"tool_version", kToolVersion},
      {"format_version", std::to_string(kReportFormatVersion)},
  };
  for (auto& [k, v] : cfg.echo(with_generator)) h.emplace_back("config." + k, v);
  return h;
}

}  // namespace

EvaluationResult evaluate(const Dataset& dataset, const RunConfig& config) {
  if (config.measures.empty()) {
    throw Error("evaluate: nothing to compute (the measure list is empty)");
  }
  WarningLog log;
  for (const auto& w : dataset.warnings) log.add(w);

  EvaluationResult result;
  std::vector<std::string> sources;
  Values values;
  if (dataset.cells) {
    merge(values, evaluate_cells(*dataset.cells, config, log), "cells");
    sources.push_back("cells");
  }
  if (dataset.units) {
    merge(values, evaluate_units(*dataset.units, config, log), "units");
    sources.push_back("units");
  }
  if (!dataset.rates.empty()) {
    merge(values, evaluate_rates(dataset.rates, config, log), "rates");
    sources.push_back("rates");
  }
  if (values.empty()) throw Error("evaluate: no model predictions to score");
  for (const auto& s : sources) {
    result.source += (result.source.empty() ? "" : "+") + s;
  }

  for (const auto& m : config.measures) {
    result.measures.push_back(m);
    if (m == "ppai") result.measures.push_back(kAlphaMeasure);
  }

  for (const auto& [model, periods] : values) {
    for (const auto& m : result.measures) {
      MeasureSummary s;
      std::vector<std::pair<PeriodId, double>> defined;
      for (const auto& [p, mv] : periods) {
        auto it = mv.find(m);
        if (it == mv.end()) continue;
        ++s.n_periods;
        if (it->second) defined.emplace_back(p, *it->second);
      }
      s.n_defined = defined.size();
      if (!defined.empty()) {
        const auto sum = summarize(PeriodSeries(m, model, defined));
        s.mean = sum.mean;
        s.std = sum.std;
      }
      if (s.n_periods > 0) result.summaries[model][m] = s;
    }
  }
  result.values = std::move(values);
  result.warnings = log.take();
  return result;
}

Report evaluate_report(const EvaluationResult& result,
                       const RunConfig& config) {
  Report r;
  r.command = "evaluate";
  r.header = base_header("evaluate", config, false);
  r.header.emplace_back("source", result.source);

  auto& values = r.add_table("measures",
                             {"model_id", "period_id", "measure", "value"});
  for (const auto& [model, periods] : result.values) {
    for (const auto& [p, mv] : periods) {
      for (const auto& m : result.measures) {
        auto it = mv.find(m);
        if (it == mv.end()) continue;
        values.rows.push_back(
            {model, std::to_string(p.value), m, report_number(it->second)});
      }
    }
  }
  auto& summary = r.add_table(
      "summary", {"model_id", "measure", "n_periods", "n_defined", "mean",
                  "std"});
  for (const auto& [model, ms] : result.summaries) {
    for (const auto& m : result.measures) {
      auto it = ms.find(m);
      if (it == ms.end()) continue;
      const auto& s = it->second;
      summary.rows.push_back({model, m, std::to_string(s.n_periods),
                              std::to_string(s.n_defined),
                              report_number(s.mean), report_number(s.std)});
    }
  }
  r.warnings = result.warnings;
  return r;
}

namespace {

Ranking make_ranking(std::string rule, const ModelScores& scores,
                     bool higher_is_better) {
  std::vector<std::pair<ModelId, double>> v(scores.begin(), scores.end());
  std::stable_sort(v.begin(), v.end(), [&](const auto& a, const auto& b) {
    return higher_is_better ? a.second > b.second : a.second < b.second;
  });
  Ranking ranking{std::move(rule), {}};
  for (std::size_t i = 0; i < v.size(); ++i) {
    RankedModel rm{v[i].first, v[i].second, i + 1, false};
    if (i > 0 && v[i].second == v[i - 1].second) {
      rm.position = ranking.order.back().position;
      rm.tied = true;
      ranking.order.back().tied = true;
    }
    ranking.order.push_back(rm);
  }
  return ranking;
}

ModelScores mean_scores(const EvaluationResult& ev, const MeasureId& m) {
  ModelScores out;
  for (const auto& [model, periods] : ev.values) {
    const auto& s = ev.summaries.at(model);
    auto it = s.find(m);
    if (it == s.end() || !it->second.mean) {
      throw Error(fmt::format(
          "compare: {} is undefined in every period for model '{}'", m,
          model));
    }
    out.emplace(model, *it->second.mean);
  }
  return out;
}

}  // namespace

ComparisonResult compare(const Dataset& dataset, const RunConfig& config) {
  const auto models = dataset.model_ids();
  if (models.size() < 2) {
    throw Error(fmt::format("compare: at least two models are required, found {}",
                            models.size()));
  }
  const bool use_eu = config.compare_method != CompareMethod::weighted;
  const bool use_weights =
      config.compare_method != CompareMethod::expected_utility;
  if (use_weights && !config.weights) {
    throw Error(
        "compare: weighted aggregation requested but no weights.* keys are "
        "configured");
  }

  RunConfig eval_cfg = config;
  eval_cfg.measures.clear();
  if (use_eu) eval_cfg.measures.push_back("expected_utility");
  if (use_weights) {
    for (const auto& [m, w] : config.weights->weights()) {
      if (m != "expected_utility" || !use_eu) eval_cfg.measures.push_back(m);
    }
  }
  const EvaluationResult ev = evaluate(dataset, eval_cfg);

  ComparisonResult res;
  res.warnings = ev.warnings;

  if (use_eu) {
    res.expected_utility = mean_scores(ev, "expected_utility");
    res.rankings.push_back(make_ranking(
        "expected_utility (mean over periods, higher is better)",
        *res.expected_utility, true));
  }
  if (use_weights) {
    for (const auto& [m, w] : config.weights->weights()) {
      const auto raw = mean_scores(ev, m);
      const auto o = config.orientation_of(m);
      switch (config.transform) {
        case AggregateTransform::raw:
          res.weighted_inputs[m] = orient(raw, o);
          break;
        case AggregateTransform::standardize:
          res.weighted_inputs[m] = standardize(orient(raw, o));
          break;
        case AggregateTransform::rank:
          res.weighted_inputs[m] = rank_models(raw, o);
          break;
      }
    }
    res.weighted = weighted_aggregate(res.weighted_inputs, *config.weights);
    const bool higher = config.transform != AggregateTransform::rank;
    res.rankings.push_back(make_ranking(
        fmt::format("weighted_aggregate (transform {}, {} is better)",
                    to_string(config.transform), higher ? "higher" : "lower"),
        *res.weighted, higher));
  }

  std::vector<double> raw_p;
  for (const auto& m : eval_cfg.measures) {
    for (std::size_t i = 0; i < models.size(); ++i) {
      for (std::size_t j = i + 1; j < models.size(); ++j) {
        const auto& a = ev.values.at(models[i]);
        const auto& b = ev.values.at(models[j]);
        std::vector<std::pair<double, double>> pairs;
        for (const auto& [p, mv] : a) {
          auto ob = b.find(p);
          if (ob == b.end()) continue;
          const auto& va = mv.at(m);
          const auto& vb = ob->second.at(m);
          if (va && vb) pairs.emplace_back(*va, *vb);
        }
        if (pairs.size() < 2) {
          res.warnings.push_back(fmt::format(
              "no signed-rank test for {} between '{}' and '{}': {} paired "
              "period(s)",
              m, models[i], models[j], pairs.size()));
          continue;
        }
        PairwiseTest t{m, models[i], models[j], wilcoxon_signed_rank(pairs),
                       1.0};
        raw_p.push_back(t.wsr.p_value);
        res.tests.push_back(std::move(t));
      }
    }
  }
  const auto adjusted = bonferroni(raw_p);
  for (std::size_t i = 0; i < res.tests.size(); ++i) {
    res.tests[i].p_adjusted = adjusted[i];
  }
  return res;
}

Report compare_report(const ComparisonResult& result,
                      const RunConfig& config) {
  Report r;
  r.command = "compare";
  r.header = base_header("compare", config, false);
  r.header.emplace_back("stats.test", "wilcoxon_signed_rank two-sided; zero "
                                      "differences dropped; exact for n <= 25");
  r.header.emplace_back("stats.correction", "bonferroni");

  for (const auto& ranking : result.rankings) {
    const auto key = ranking.rule.substr(0, ranking.rule.find(' '));
    r.results.emplace_back("rule." + key, ranking.rule);
    std::string best;
    for (const auto& rm : ranking.order) {
      if (rm.position != 1) break;
      best += (best.empty() ? "" : ",") + rm.model;
    }
    const bool tie = ranking.order.size() > 1 && ranking.order[1].position == 1;
    r.results.emplace_back("best." + key, tie ? "tie: " + best : best);
  }

  if (result.expected_utility) {
    auto& t = r.add_table("expected_utility", {"model_id", "score"});
    for (const auto& [m, s] : *result.expected_utility) {
      t.rows.push_back({m, report_number(s)});
    }
  }
  if (result.weighted) {
    auto& in = r.add_table("weighted_inputs", {"measure", "model_id", "score"});
    for (const auto& [measure, scores] : result.weighted_inputs) {
      for (const auto& [m, s] : scores) {
        in.rows.push_back({measure, m, report_number(s)});
      }
    }
    auto& t = r.add_table("weighted", {"model_id", "score"});
    for (const auto& [m, s] : *result.weighted) {
      t.rows.push_back({m, report_number(s)});
    }
  }
  auto& tests = r.add_table(
      "tests", {"measure", "model_a", "model_b", "n_used", "w_plus", "p_value",
                "p_bonferroni", "method", "significant"});
  for (const auto& t : result.tests) {
    tests.rows.push_back(
        {t.measure, t.model_a, t.model_b, std::to_string(t.wsr.n_used),
         report_number(t.wsr.w_plus), report_number(t.wsr.p_value),
         report_number(t.p_adjusted),
         t.wsr.method == WsrMethod::exact ? "exact" : "normal",
         t.p_adjusted < config.significance ? "yes" : "no"});
  }
  auto& rank = r.add_table("ranking",
                           {"rule", "position", "model_id", "score", "tied"});
  for (const auto& ranking : result.rankings) {
    const auto key = ranking.rule.substr(0, ranking.rule.find(' '));
    for (const auto& rm : ranking.order) {
      rank.rows.push_back({key, std::to_string(rm.position), rm.model,
                           report_number(rm.score), rm.tied ? "yes" : "no"});
    }
  }
  r.warnings = result.warnings;
  return r;
}

AlphaOptimization optimize_alpha(std::vector<HotspotUnit> units,
                                 double target_coverage, double grid_step) {
  AlphaOptimization out;
  out.target_coverage = target_coverage;
  out.grid_step = grid_step;
  out.ordered = order_units(std::move(units));
  out.levels = cumulative_levels(out.ordered);
  out.search = optimal_alpha(out.levels, target_coverage, grid_step);
  return out;
}

Report optimize_alpha_report(const AlphaOptimization& result,
                             const RunConfig& config) {
  Report r;
  r.command = "optimize-alpha";
  RunConfig echoed = config;
  echoed.target_coverage = result.target_coverage;
  echoed.grid_step = result.grid_step;
  r.header = base_header("optimize-alpha", echoed, false);

  const auto& s = result.search;
  r.results = {
      {"alpha_star", report_number(s.alpha_star)},
      {"valid_range.lo", report_number(s.valid_range.lo)},
      {"valid_range.hi", report_number(s.valid_range.hi)},
      {"target_level.prefix_len", std::to_string(s.target_level.prefix_len)},
      {"target_level.cum_area", report_number(s.target_level.cum_area)},
      {"target_level.cum_crime", report_number(s.target_level.cum_crime)},
  };

  auto& cum = r.add_table(
      "cumulative", {"level", "unit_id", "area_fraction", "crime_fraction",
                     "cum_area", "cum_crime", "pai", "ppai_alpha_star"});
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    const auto& u = result.ordered[i];
    const auto& l = result.levels[i];
    cum.rows.push_back({std::to_string(l.prefix_len), u.id,
                        report_number(u.area_fraction),
                        report_number(u.crime_fraction),
                        report_number(l.cum_area), report_number(l.cum_crime),
                        report_number(pai(l.cum_crime, l.cum_area)),
                        report_number(l.ppai(s.alpha_star))});
  }
  auto& scan = r.add_table("alpha_scan", {"alpha", "peak_prefix_len", "valid"});
  for (const auto& d : s.per_alpha) {
    scan.rows.push_back({report_number(d.alpha),
                         std::to_string(d.peak_prefix_len),
                         s.valid_range.contains(d.alpha) ? "yes" : "no"});
  }
  return r;
}

GeneratedDataset generate_dataset(const RunConfig& config) {
  GeneratorSpec spec = config.generator;
  spec.first_period = 0;
  spec.period_count = config.generator.period_count + 1;
  spec.validate();
  GridSpec grid = make_grid(spec);
  const std::size_t k = config.gen_top_k;
  if (k > grid.size()) {
    throw Error(fmt::format("gen: top_k = {} exceeds the {} cells", k,
                            grid.size()));
  }

  Rng rng(spec.seed);
  EventSet events = generate_events(spec, grid, rng);

  std::vector<CellId> heaviest;
  {
    const auto w = spec.resolved_weights();
    std::vector<std::size_t> idx(grid.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    for (std::size_t i = 0; i < k; ++i) heaviest.push_back(grid.cells()[idx[i]].id);
  }

  GeneratedDataset out{grid, std::move(events), {}, {}};
  for (std::size_t p = 1; p <= config.generator.period_count; ++p) {
    const PeriodId period{static_cast<std::int64_t>(p)};
    const PeriodId previous{period.value - 1};
    const EventSet train = out.events.between(previous, previous);
    out.selections["top_k"].emplace(period,
                                    top_k_baseline(train, grid, k, period));
    out.surfaces["top_k"].emplace(
        period, empirical_surface(train, grid, period, config.gen_smoothing));
    out.selections["uniform"].emplace(period,
                                      random_selection(grid, k, period, rng));
    out.surfaces["uniform"].emplace(period,
                                    ProbabilitySurface::uniform(grid, period));
    out.selections["oracle"].emplace(period,
                                     HotspotSelection(grid, period, heaviest));
    out.surfaces["oracle"].emplace(period, true_surface(spec, grid, period));
  }
  return out;
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void write_dataset(const GeneratedDataset& data,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(fmt::format("cannot create output directory {}: {}",
                            dir.string(), ec.message()));
  }
  write_file(dir / "cells.csv",
             [&](std::ostream& o) { write_grid(o, data.grid); });
  write_file(dir / "events.csv",
             [&](std::ostream& o) { write_events(o, data.events); });
  write_file(dir / "selections.csv",
             [&](std::ostream& o) { write_selections(o, data.selections); });
  write_file(dir / "surfaces.csv",
             [&](std::ostream& o) { write_surfaces(o, data.surfaces); });
}

Report gen_report(const GeneratedDataset& data, const RunConfig& config,
                  const std::filesystem::path& dir) {
  Report r;
  r.command = "gen";
  r.header = base_header("gen", config, true);
  r.header.emplace_back("gen.prng", "mt19937_64, 53-bit uniform doubles");
  r.results = {
      {"out", dir.string()},
      {"cells", std::to_string(data.grid.size())},
      {"events", std::to_string(data.events.size())},
      {"training_period", "0"},
      {"evaluation_periods",
       fmt::format("1..{}", config.generator.period_count)},
      {"models", "oracle,top_k,uniform"},
  };
  return r;
}

}  // namespace hseval
