#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "infodiff/stats.hpp"
#include "support/reference.hpp"

using namespace infodiff;

namespace {

PairedSample from_diffs(const std::vector<double>& diffs) {
  PairedSample s;
  for (double d : diffs) s.pairs.emplace_back(d, 0.0);
  return s;
}

// Normal approximation without continuity correction, written out directly.
double normal_upper_tail(const std::vector<double>& ranks, double w_plus) {
  const double n = static_cast<double>(ranks.size());
  double var = 0;
  for (double r : ranks) var += r * r;
  var /= 4.0;  // equals n(n+1)(2n+1)/24 minus the tie correction
  const double z = (w_plus - n * (n + 1) / 4.0) / std::sqrt(var);
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

TEST(Wilcoxon, FivePositiveDifferences) {
  const auto r = wilcoxon_one_tailed(from_diffs({1, 2, 3, 4, 5}), Alternative::XGreater);
  EXPECT_EQ(r.statistic, 15.0);
  EXPECT_EQ(r.n_effective, 5u);
  EXPECT_EQ(r.method, WilcoxonMethod::Exact);
  EXPECT_DOUBLE_EQ(r.p_one_tailed, 1.0 / 32.0);
  EXPECT_DOUBLE_EQ(wilcoxon_one_tailed(from_diffs({1, 2, 3, 4, 5}), Alternative::XLess).p_one_tailed, 1.0);
}

TEST(Wilcoxon, AllZeroDifferencesAreDegenerate) {
  PairedSample s;
  for (int i = 0; i < 6; ++i) s.pairs.emplace_back(i, i);
  EXPECT_THROW(wilcoxon_one_tailed(s, Alternative::XGreater), DegenerateSampleError);
  EXPECT_THROW(wilcoxon_one_tailed(PairedSample{}, Alternative::XGreater), InputError);
}

TEST(Wilcoxon, ZerosAreDroppedBeforeRanking) {
  const auto a = wilcoxon_one_tailed(from_diffs({0, 0, 1, -2, 3}), Alternative::XGreater);
  const auto b = wilcoxon_one_tailed(from_diffs({1, -2, 3}), Alternative::XGreater);
  EXPECT_EQ(a.n_effective, 3u);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.p_one_tailed, b.p_one_tailed);
}

TEST(Wilcoxon, ExactPathMatchesEnumeration) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> value(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 16;
    std::vector<double> diffs;
    while (diffs.size() < n) {
      const int d = value(rng);
      if (d != 0) diffs.push_back(d);  // small range forces plenty of ties
    }
    std::vector<double> mag;
    for (double d : diffs) mag.push_back(std::abs(d));
    const auto ranks = average_ranks(mag);
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (diffs[i] > 0) w += ranks[i];
    const auto up = wilcoxon_one_tailed(from_diffs(diffs), Alternative::XGreater);
    const auto down = wilcoxon_one_tailed(from_diffs(diffs), Alternative::XLess);
    EXPECT_DOUBLE_EQ(up.statistic, w);
    EXPECT_NEAR(up.p_one_tailed, reference::wilcoxon_exact_bruteforce(ranks, w, true), 1e-12);
    EXPECT_NEAR(down.p_one_tailed, reference::wilcoxon_exact_bruteforce(ranks, w, false), 1e-12);
  }
}

TEST(Wilcoxon, AverageRanksShareTies) {
  EXPECT_EQ(average_ranks({10, 20, 20, 30}), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(average_ranks({5, 5, 5}), (std::vector<double>{2, 2, 2}));
}

TEST(Wilcoxon, FiftyPairFloor) {
  // Every one of 50 distinct differences favours x: the smallest p a
  // 50-graph ensemble can produce.
  std::vector<double> diffs;
  for (int i = 1; i <= 50; ++i) diffs.push_back(i * 0.01);
  const auto r = wilcoxon_one_tailed(from_diffs(diffs), Alternative::XGreater);
  EXPECT_EQ(r.method, WilcoxonMethod::NormalApproximation);
  EXPECT_EQ(r.statistic, 1275.0);
  EXPECT_NEAR(r.p_one_tailed / 3.778465e-10, 1.0, 5e-4);
}

TEST(Wilcoxon, ExactAndNormalAgreeNearTheLimit) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  int compared = 0;
  for (std::size_t n = 20; n <= kExactWilcoxonLimit; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> diffs;
      for (std::size_t i = 0; i < n; ++i) diffs.push_back(noise(rng));
      const auto exact = wilcoxon_one_tailed(from_diffs(diffs), Alternative::XGreater);
      ASSERT_EQ(exact.method, WilcoxonMethod::Exact);
      if (exact.p_one_tailed < 0.1) continue;
      std::vector<double> mag;
      for (double d : diffs) mag.push_back(std::abs(d));
      const double approx = normal_upper_tail(average_ranks(mag), exact.statistic);
      EXPECT_NEAR(approx / exact.p_one_tailed, 1.0, 0.1) << "n=" << n;
      ++compared;
    }
  }
  EXPECT_GT(compared, 50);
}

TEST(Wilcoxon, NormalPathMatchesDirectFormulaWithTies) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> value(-10, 12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> diffs;
    while (diffs.size() < 40) {
      const int d = value(rng);
      if (d != 0) diffs.push_back(d);
    }
    const auto r = wilcoxon_one_tailed(from_diffs(diffs), Alternative::XGreater);
    ASSERT_EQ(r.method, WilcoxonMethod::NormalApproximation);
    std::vector<double> mag;
    for (double d : diffs) mag.push_back(std::abs(d));
    EXPECT_NEAR(r.p_one_tailed, normal_upper_tail(average_ranks(mag), r.statistic), 1e-12);
  }
}

TEST(Wilcoxon, PairOrderDoesNotMatter) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.3, 1.0);
  for (std::size_t n : {12, 60}) {
    PairedSample s;
    for (std::size_t i = 0; i < n; ++i) s.pairs.emplace_back(noise(rng), noise(rng) - 0.2);
    const auto a = wilcoxon_one_tailed(s, Alternative::XGreater);
    std::shuffle(s.pairs.begin(), s.pairs.end(), rng);
    const auto b = wilcoxon_one_tailed(s, Alternative::XGreater);
    EXPECT_EQ(a.statistic, b.statistic);
    EXPECT_EQ(a.p_one_tailed, b.p_one_tailed);
  }
}

TEST(Wilcoxon, CompareStrategiesPicksTheTail) {
  const auto s = from_diffs({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(compare_strategies(s, true).p_one_tailed, 1.0 / 32.0);
  EXPECT_DOUBLE_EQ(compare_strategies(s, false).p_one_tailed, 1.0);
}

TEST(Wilcoxon, ParseAlternative) {
  EXPECT_EQ(parse_alternative("x_less"), Alternative::XLess);
  EXPECT_EQ(parse_alternative("greater"), Alternative::XGreater);
  EXPECT_THROW(parse_alternative("two-sided"), InputError);
}

TEST(Summarize, MeanAndMedian) {
  const auto s = summarize({1, 2, 3, 4});
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_EQ(s.median, 2.5);
  EXPECT_EQ(summarize({3, 1, 2}).median, 2.0);
  EXPECT_THROW(summarize({}), InputError);
}

TEST(Engagement, PublishedSummariesAndTest) {
  const auto records = load_engagement_csv(std::string(INFODIFF_DATA_DIR) + "/engagement.csv");
  ASSERT_EQ(records.size(), 134u);
  std::vector<double> t, f;
  for (const auto& r : records) {
    t.push_back(static_cast<double>(r.true_engagement));
    f.push_back(static_cast<double>(r.false_engagement));
  }
  const auto st = summarize(t);
  const auto sf = summarize(f);
  EXPECT_NEAR(st.mean, 2729, 1);
  EXPECT_EQ(st.median, 1587.5);
  EXPECT_NEAR(sf.mean, 191316, 1);
  EXPECT_EQ(sf.median, 4461);
  const auto r = wilcoxon_one_tailed(engagement_pairs(records), Alternative::XLess);
  EXPECT_EQ(r.method, WilcoxonMethod::NormalApproximation);
  EXPECT_LT(std::abs(std::log10(r.p_one_tailed) - std::log10(4.62e-12)), 1.0);
}

TEST(Engagement, CsvValidation) {
  for (const char* text : {"id,true,false\n1,2,3\n", "news_id,true,false\n1,2\n", "news_id,true,false\n1,-2,3\n",
                           "news_id,true,false\n1,2,3\n1,4,5\n", "news_id,true,false\n1,2,3,4\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_engagement_csv(in), InputError) << text;
  }
  std::istringstream ok("news_id,true,false\r\n7,1,2\r\n");
  const auto rows = read_engagement_csv(ok);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].false_engagement, 2);
  EXPECT_THROW(load_engagement_csv("/nonexistent/engagement.csv"), IoError);
}
