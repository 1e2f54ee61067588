#include <doctest.h>

#include <cmath>
#include <random>

#include "hseval/combine.hpp"
#include "hseval/error.hpp"

using namespace hseval;

namespace {

const LabelConditionalRates kModelA{0.85, 0.15, 0.30, 0.70, 0.05};
const LabelConditionalRates kModelB{0.75, 0.25, 0.45, 0.55, 0.05};

// EU scaled by 100 (rates) * 100 (share) * 2 (half-unit utilities), in
// integers. Rates and share are given in hundredths, utilities in halves.
long long eu_scaled(int tp, int fp, int tn, int fn, int share, int utp,
                    int ufp, int utn, int ufn) {
  return static_cast<long long>(share) * (tp * utp + fp * ufp) +
         static_cast<long long>(100 - share) * (tn * utn + fn * ufn);
}

}  // namespace

TEST_CASE("conditional rates") {
  const auto sym = conditional_rates({1, 1, 1, 1});
  CHECK(sym.p_tp_given_pos == 0.5);
  CHECK(sym.p_fp_given_pos == 0.5);
  CHECK(sym.p_tn_given_neg == 0.5);
  CHECK(sym.p_fn_given_neg == 0.5);
  CHECK(sym.share_positive == 0.5);

  const auto r = conditional_rates({3, 1, 4, 2});
  CHECK(r.p_tp_given_pos == doctest::Approx(0.75));
  CHECK(r.p_fp_given_pos == doctest::Approx(0.25));
  CHECK(r.p_tn_given_neg == doctest::Approx(2.0 / 3.0));
  CHECK(r.p_fn_given_neg == doctest::Approx(1.0 / 3.0));
  CHECK(r.share_positive == doctest::Approx(0.4));

  const auto a = conditional_rates({85, 15, 30, 70});
  CHECK(a.p_tp_given_pos == doctest::Approx(kModelA.p_tp_given_pos));
  CHECK(a.p_fp_given_pos == doctest::Approx(kModelA.p_fp_given_pos));
  CHECK(a.p_tn_given_neg == doctest::Approx(kModelA.p_tn_given_neg));
  CHECK(a.p_fn_given_neg == doctest::Approx(kModelA.p_fn_given_neg));
  const LabelConditionalRates injected{a.p_tp_given_pos, a.p_fp_given_pos,
                                       a.p_tn_given_neg, a.p_fn_given_neg,
                                       0.05};
  CHECK(expected_utility(injected, {}) == doctest::Approx(-0.34125));

  CHECK_THROWS_AS(LabelConditionalRates(0.8, 0.3, 0.5, 0.5, 0.1), Error);
  CHECK_THROWS_AS(LabelConditionalRates(0.8, 0.2, 0.5, 0.5, 1.1), Error);
}

TEST_CASE("expected utility worked example") {
  const UtilitySpec u{1.0, -0.5, 1.0, -1.0};
  const double a = eu_scaled(85, 15, 30, 70, 5, 2, -1, 2, -2) / 20000.0;
  const double b = eu_scaled(75, 25, 45, 55, 5, 2, -1, 2, -2) / 20000.0;
  CHECK(a == -0.34125);
  CHECK(b == -0.06375);
  CHECK(std::abs(expected_utility(kModelA, u) - a) <= 1e-12);
  CHECK(std::abs(expected_utility(kModelB, u) - b) <= 1e-12);
  CHECK(expected_utility(kModelA, {0, 0, 0, 0}) == 0.0);
}

TEST_CASE("expected utility properties") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  std::uniform_real_distribution<double> uu(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double tp = p(rng), tn = p(rng);
    const LabelConditionalRates r{tp, 1 - tp, tn, 1 - tn, p(rng)};
    const UtilitySpec u1{uu(rng), uu(rng), uu(rng), uu(rng)};
    const UtilitySpec u2{uu(rng), uu(rng), uu(rng), uu(rng)};
    const UtilitySpec sum{u1.u_tp + u2.u_tp, u1.u_fp + u2.u_fp,
                          u1.u_tn + u2.u_tn, u1.u_fn + u2.u_fn};
    CHECK(expected_utility(r, sum) ==
          doctest::Approx(expected_utility(r, u1) + expected_utility(r, u2)));
    CHECK(expected_utility(r, {1, 1, 1, 1}) == doctest::Approx(1.0));
  }
}

TEST_CASE("expected utility argmax is affine invariant") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  std::uniform_real_distribution<double> uu(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LabelConditionalRates> models;
    for (int m = 0; m < 4; ++m) {
      const double tp = p(rng), tn = p(rng);
      models.emplace_back(tp, 1 - tp, tn, 1 - tn, p(rng));
    }
    const UtilitySpec u{uu(rng), uu(rng), uu(rng), uu(rng)};
    const double c = uu(rng), k = 0.1 + p(rng) * 5;
    const UtilitySpec shifted{u.u_tp + c, u.u_fp + c, u.u_tn + c, u.u_fn + c};
    const UtilitySpec scaled{u.u_tp * k, u.u_fp * k, u.u_tn * k, u.u_fn * k};
    auto argmax = [&](const UtilitySpec& s) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < models.size(); ++i) {
        if (expected_utility(models[i], s) > expected_utility(models[best], s)) {
          best = i;
        }
      }
      return best;
    };
    CHECK(argmax(shifted) == argmax(u));
    CHECK(argmax(scaled) == argmax(u));
  }
}

TEST_CASE("hit rate from conditionals") {
  CHECK(hit_rate_from_conditionals(kModelA) ==
        doctest::Approx(0.85 * 0.05 / (0.85 * 0.05 + 0.70 * 0.95)));
  CHECK(std::abs(hit_rate_from_conditionals(kModelA) - 0.0601) <= 5e-5);
  CHECK(std::abs(hit_rate_from_conditionals(kModelB) - 0.0670) <= 5e-5);
  CHECK(hit_rate_from_conditionals({0.4, 0.6, 0.5, 0.5, 1.0}) == 1.0);
  CHECK_THROWS_AS(hit_rate_from_conditionals({0.0, 1.0, 1.0, 0.0, 0.3}), Error);
}

TEST_CASE("weight vector") {
  CHECK_NOTHROW(WeightVector({{"hit_rate", 0.7}, {"precision", 0.3}}));
  CHECK_THROWS_AS(WeightVector({{"hit_rate", 0.7}, {"precision", 0.4}}), Error);
  CHECK_THROWS_AS(WeightVector({{"hit_rate", 1.2}, {"precision", -0.2}}), Error);
  CHECK_THROWS_AS(WeightVector({}), Error);
}

TEST_CASE("standardize") {
  const auto z = standardize({{"a", 1}, {"b", 2}, {"c", 3}});
  const double s = std::sqrt(1.5);
  CHECK(z.at("a") == doctest::Approx(-s));
  CHECK(z.at("a") == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(z.at("b") == doctest::Approx(0.0));
  CHECK(z.at("c") == doctest::Approx(s));
  CHECK_THROWS_AS(standardize({{"a", 5}, {"b", 5}}), Error);
  CHECK_THROWS_AS(standardize({{"a", 5}}), Error);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(3.0, 7.0);
  for (int trial = 0; trial < 50; ++trial) {
    ModelScores in;
    for (int m = 0; m < 6; ++m) in["m" + std::to_string(m)] = n(rng);
    const auto out = standardize(in);
    double mean = 0, sq = 0;
    for (const auto& [k, v] : out) mean += v;
    mean /= out.size();
    for (const auto& [k, v] : out) sq += (v - mean) * (v - mean);
    CHECK(std::abs(mean) <= 1e-9);
    CHECK(std::abs(std::sqrt(sq / out.size()) - 1.0) <= 1e-9);
    const auto again = standardize(out);
    for (const auto& [k, v] : out) CHECK(again.at(k) == doctest::Approx(v));
  }
}

TEST_CASE("rank models") {
  const auto two = rank_models({{"a", 0.9}, {"b", 0.1}},
                               Orientation::higher_is_better);
  CHECK(two.at("a") == 1.0);
  CHECK(two.at("b") == 2.0);
  const auto tied = rank_models({{"a", 0.5}, {"b", 0.5}, {"c", 0.1}},
                                Orientation::higher_is_better);
  CHECK(tied.at("a") == 1.5);
  CHECK(tied.at("b") == 1.5);
  CHECK(tied.at("c") == 3.0);
  CHECK(rank_models({{"x", 4.0}}, Orientation::higher_is_better).at("x") == 1.0);
  const auto low = rank_models({{"a", 0.9}, {"b", 0.1}},
                               Orientation::lower_is_better);
  CHECK(low.at("b") == 1.0);
}

TEST_CASE("orient") {
  const ModelScores s{{"a", 0.2}, {"b", -1.0}};
  CHECK(orient(s, Orientation::higher_is_better) == s);
  const auto neg = orient(s, Orientation::lower_is_better);
  CHECK(neg.at("a") == -0.2);
  CHECK(neg.at("b") == 1.0);
}

TEST_CASE("weighted aggregate") {
  const WeightVector w({{"hit_rate", 0.7}, {"precision", 0.3}});
  const auto agg = weighted_aggregate(
      {{"hit_rate", {{"A", 0.06}, {"B", 0.067}}},
       {"precision", {{"A", 0.85}, {"B", 0.75}}}},
      w);
  CHECK(agg.at("A") == doctest::Approx(0.7 * 0.06 + 0.3 * 0.85));
  CHECK(std::abs(agg.at("A") - 0.297) <= 5e-4);
  CHECK(agg.at("B") == doctest::Approx(0.7 * 0.067 + 0.3 * 0.75));
  CHECK(agg.at("A") > agg.at("B"));

  const ModelScores one{{"x", 0.3}, {"y", 2.5}};
  CHECK(weighted_aggregate({{"m", one}}, WeightVector({{"m", 1.0}})) == one);

  const WeightVector w2({{"p", 0.35}, {"q", 0.65}});
  const auto fixed = weighted_aggregate({{"p", one}, {"q", one}}, w2);
  for (const auto& [k, v] : one) CHECK(fixed.at(k) == doctest::Approx(v));

  CHECK_THROWS_AS(weighted_aggregate({{"hit_rate", {{"A", 0.1}}}}, w), Error);
  CHECK_THROWS_AS(
      weighted_aggregate({{"hit_rate", {{"A", 0.1}, {"B", 0.2}}},
                          {"precision", {{"A", 0.1}}}},
                         w),
      Error);
  CHECK_THROWS_AS(
      weighted_aggregate({{"hit_rate", {{"A", 0.1}}},
                          {"precision", {{"A", 0.1}}},
                          {"extra", {{"A", 0.1}}}},
                         w),
      Error);
}

TEST_CASE("weighted aggregate preserves dominance") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double w1 = 0.01 + 0.98 * d(rng);
    const WeightVector w({{"m1", w1}, {"m2", 1.0 - w1}});
    const double a1 = d(rng), a2 = d(rng);
    const ModelScores m1{{"a", a1}, {"b", a1 - d(rng)}};
    const ModelScores m2{{"a", a2}, {"b", a2 - d(rng)}};
    const auto agg = weighted_aggregate({{"m1", m1}, {"m2", m2}}, w);
    CHECK(agg.at("a") >= agg.at("b"));
  }
}
