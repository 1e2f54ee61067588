#include "hseval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

PeriodSeries::PeriodSeries(MeasureId measure, ModelId model,
                           std::vector<std::pair<PeriodId, double>> values)
    : measure_(std::move(measure)),
      model_(std::move(model)),
      values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(fmt::format("series {}/{}: no values", model_, measure_));
  }
  std::sort(values_.begin(), values_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i].first == values_[i - 1].first) {
      throw Error(fmt::format("series {}/{}: period {} appears twice", model_,
                              measure_, values_[i].first.value));
    }
  }
}

Summary summarize(const PeriodSeries& series) {
  const auto& v = series.values();
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (const auto& [p, x] : v) mean += x;
  mean /= n;
  Summary s{mean, std::nullopt};
  if (v.size() >= 2) {
    double ss = 0.0;
    for (const auto& [p, x] : v) ss += (x - mean) * (x - mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

namespace {

struct SignedRanks {
  // Ranks are stored doubled so mid-ranks stay integral.
  std::vector<std::size_t> doubled_rank;
  std::vector<bool> positive;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
};

SignedRanks rank_differences(const std::vector<double>& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(d[a]) < std::abs(d[b]);
  });
  SignedRanks r;
  r.doubled_rank.resize(d.size());
  r.positive.resize(d.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) {
      ++j;
    }
    // 1-based positions i+1..j+1, mid-rank (i+j+2)/2, doubled i+j+2
    for (std::size_t k = i; k <= j; ++k) r.doubled_rank[order[k]] = i + j + 2;
    const auto t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  for (std::size_t i = 0; i < d.size(); ++i) r.positive[i] = d[i] > 0.0;
  return r;
}

double exact_p(const SignedRanks& r, std::size_t observed_doubled,
               bool two_sided) {
  const std::size_t max_sum = std::accumulate(
      r.doubled_rank.begin(), r.doubled_rank.end(), std::size_t{0});
  // counts[s] = number of sign assignments whose doubled W+ equals s
  std::vector<double> counts(max_sum + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t rank : r.doubled_rank) {
    for (std::size_t s = reach + 1; s-- > 0;) {
      if (counts[s] != 0.0) counts[s + rank] += counts[s];
    }
    reach += rank;
  }
  const double total = std::ldexp(1.0, static_cast<int>(r.doubled_rank.size()));
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    if (s <= observed_doubled) lower += counts[s];
    if (s >= observed_doubled) upper += counts[s];
  }
  lower /= total;
  upper /= total;
  if (!two_sided) return upper;
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

double normal_p(const SignedRanks& r, double w_plus, bool two_sided) {
  const auto n = static_cast<double>(r.doubled_rank.size());
  const double mean = n * (n + 1.0) / 4.0;
  const double var =
      n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - r.tie_term / 48.0;
  const double sd = std::sqrt(var);
  if (two_sided) {
    const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / sd;
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }
  const double z = (w_plus - mean - 0.5) / sd;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

WsrResult wilcoxon_signed_rank(
    const std::vector<std::pair<double, double>>& pairs,
    const WsrOptions& options) {
  if (pairs.empty()) throw Error("wilcoxon: no pairs");
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error("wilcoxon: non-finite value");
    }
    if (x - y != 0.0) d.push_back(x - y);
  }

  WsrResult result;
  result.n_used = d.size();
  if (d.empty()) {
    result.p_value = 1.0;
    result.method = WsrMethod::exact;
    return result;
  }

  const SignedRanks r = rank_differences(d);
  std::size_t doubled = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (r.positive[i]) doubled += r.doubled_rank[i];
  }
  result.w_plus = static_cast<double>(doubled) / 2.0;

  result.method = options.force_method.value_or(
      d.size() <= options.exact_max_n ? WsrMethod::exact
                                      : WsrMethod::normal_approximation);
  if (result.method == WsrMethod::exact && d.size() > 60) {
    throw Error("wilcoxon: exact distribution limited to 60 differences");
  }
  result.p_value = result.method == WsrMethod::exact
                       ? exact_p(r, doubled, options.two_sided)
                       : normal_p(r, result.w_plus, options.two_sided);
  return result;
}

std::vector<double> bonferroni(const std::vector<double>& p_values) {
  const auto m = static_cast<double>(p_values.size());
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(fmt::format("bonferroni: p-value {} is outside [0,1]", p));
    }
    out.push_back(std::min(1.0, p * m));
  }
  return out;
}

}  // namespace hseval
