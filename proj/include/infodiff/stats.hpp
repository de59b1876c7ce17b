#ifndef INFODIFF_STATS_HPP
#define INFODIFF_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infodiff/errors.hpp"

namespace infodiff {

struct PairedSample {
  std::vector<std::pair<double, double>> pairs;
  std::vector<std::string> labels;  // optional, parallel to pairs
};

/// x_less: the x column tends to be smaller than y. x_greater: larger.
enum class Alternative { XLess, XGreater };

inline std::string_view to_string(Alternative a) { return a == Alternative::XLess ? "x_less" : "x_greater"; }

inline Alternative parse_alternative(std::string_view s) {
  if (s == "x_less" || s == "less") return Alternative::XLess;
  if (s == "x_greater" || s == "greater") return Alternative::XGreater;
  throw InputError("unknown alternative '" + std::string(s) + "' (expected x_less or x_greater)");
}

enum class WilcoxonMethod { Exact, NormalApproximation };

inline std::string_view to_string(WilcoxonMethod m) {
  return m == WilcoxonMethod::Exact ? "exact" : "normal-approximation";
}

struct WilcoxonResult {
  double statistic = 0.0;  // W+: rank sum of the positive differences x - y
  double p_one_tailed = 1.0;
  std::size_t n_effective = 0;
  WilcoxonMethod method = WilcoxonMethod::Exact;
  /// Conventions used: zero handling, tie handling, continuity correction.
  std::string variant;
};

/// Largest n_effective handled by exact enumeration of the sign distribution.
inline constexpr std::size_t kExactWilcoxonLimit = 25;

/// Average ranks (1-based) of `values`, ties sharing the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(W+ <= w) and P(W+ >= w) under the null, for the given (possibly tied)
/// ranks. Ranks are doubled so half-integer ties stay integral; the sign
/// distribution is built by dynamic programming over the 2^n assignments.
inline std::pair<double, double> exact_tails(const std::vector<double>& ranks, double w) {
  std::vector<std::size_t> doubled;
  std::size_t total = 0;
  for (double r : ranks) {
    doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
    total += doubled.back();
  }
  std::vector<double> dist(total + 1, 0.0);
  dist[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t r : doubled) {
    for (std::size_t s = reach + 1; s-- > 0;) {
      if (dist[s] != 0.0) dist[s + r] += dist[s];
    }
    reach += r;
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(ranks.size()));
  const auto target = static_cast<std::size_t>(std::llround(2.0 * w));
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t s = 0; s <= total; ++s) {
    if (s <= target) lower += dist[s];
    if (s >= target) upper += dist[s];
  }
  return {std::min(1.0, lower * scale), std::min(1.0, upper * scale)};
}

}  // namespace detail

/// One-tailed Wilcoxon signed-rank test on d = x - y.
///
/// Zero differences are dropped; tied |d| get average ranks. Up to
/// kExactWilcoxonLimit nonzero differences the null distribution is exact;
/// beyond that the normal approximation with tie-corrected variance is used,
/// without continuity correction. Throws DegenerateSampleError when every
/// difference is zero.
inline WilcoxonResult wilcoxon_one_tailed(const PairedSample& sample, Alternative alternative) {
  if (sample.pairs.empty()) throw InputError("wilcoxon: empty sample");
  std::vector<double> diffs;
  for (const auto& [x, y] : sample.pairs) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw InputError("wilcoxon: non-finite value");
    if (x - y != 0.0) diffs.push_back(x - y);
  }
  if (diffs.empty()) throw DegenerateSampleError("wilcoxon: every paired difference is zero");

  std::vector<double> magnitude(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitude.begin(), [](double d) { return std::abs(d); });
  const auto ranks = average_ranks(magnitude);

  WilcoxonResult res;
  res.n_effective = diffs.size();
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0) res.statistic += ranks[i];
  }

  if (res.n_effective <= kExactWilcoxonLimit) {
    res.method = WilcoxonMethod::Exact;
    res.variant = "zero differences dropped; average ranks for ties; exact sign distribution";
    const auto [lower, upper] = detail::exact_tails(ranks, res.statistic);
    res.p_one_tailed = alternative == Alternative::XLess ? lower : upper;
    return res;
  }

  const double n = static_cast<double>(res.n_effective);
  const double mean = n * (n + 1.0) / 4.0;
  double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  std::vector<double> sorted = magnitude;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    variance -= (t * t * t - t) / 48.0;
    i = j;
  }
  const double z = (res.statistic - mean) / std::sqrt(variance);
  res.method = WilcoxonMethod::NormalApproximation;
  res.variant = "zero differences dropped; average ranks for ties; tie-corrected variance; no continuity correction";
  res.p_one_tailed = alternative == Alternative::XLess ? detail::normal_cdf(z) : detail::normal_cdf(-z);
  return res;
}

/// Paired comparison of a centrality strategy (x) against the random
/// baseline (y). `higher_is_better` selects x_greater, otherwise x_less.
inline WilcoxonResult compare_strategies(const PairedSample& centrality_vs_random, bool higher_is_better) {
  return wilcoxon_one_tailed(centrality_vs_random, higher_is_better ? Alternative::XGreater : Alternative::XLess);
}

struct Summary {
  double mean = 0.0;
  double median = 0.0;
};

inline Summary summarize(std::vector<double> values) {
  if (values.empty()) throw InputError("summarize: empty sequence");
  Summary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

struct EngagementRecord {
  std::int64_t news_id = 0;
  std::int64_t true_engagement = 0;
  std::int64_t false_engagement = 0;
};

/// Reads `news_id,true,false` CSV (header required).
inline std::vector<EngagementRecord> read_engagement_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("engagement csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "news_id,true,false") throw InputError("engagement csv: header must be 'news_id,true,false'");
  std::vector<EngagementRecord> records;
  std::set<std::int64_t> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    EngagementRecord r;
    char c1 = 0;
    char c2 = 0;
    std::string rest;
    if (!(row >> r.news_id >> c1 >> r.true_engagement >> c2 >> r.false_engagement) || c1 != ',' || c2 != ',' ||
        (row >> rest)) {
      throw InputError("engagement csv: malformed line " + std::to_string(line_no));
    }
    if (r.true_engagement < 0 || r.false_engagement < 0) {
      throw InputError("engagement csv: negative engagement on line " + std::to_string(line_no));
    }
    if (!seen.insert(r.news_id).second) {
      throw InputError("engagement csv: duplicate news_id " + std::to_string(r.news_id));
    }
    records.push_back(r);
  }
  return records;
}

inline std::vector<EngagementRecord> load_engagement_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_engagement_csv(in);
}

/// Pairs (true, false) per news item: x = true engagement, y = false.
inline PairedSample engagement_pairs(const std::vector<EngagementRecord>& records) {
  PairedSample s;
  for (const auto& r : records) {
    s.pairs.emplace_back(static_cast<double>(r.true_engagement), static_cast<double>(r.false_engagement));
    s.labels.push_back(std::to_string(r.news_id));
  }
  return s;
}

}  // namespace infodiff

#endif  // INFODIFF_STATS_HPP
