#ifndef INFODIFF_GENERATORS_HPP
#define INFODIFF_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "infodiff/errors.hpp"
#include "infodiff/graph.hpp"
#include "infodiff/rng.hpp"

namespace infodiff {

struct ErParams {
  std::size_t n = 0;
  double edge_exist_prob = 0.0;
};

/// Gaussian random partition. Community sizes ~ Normal(mean s, variance s/v).
struct GaussianPartitionParams {
  std::size_t n = 0;
  double s = 1.0;
  double v = 1.0;
  double p_in = 0.0;
  double p_out = 0.0;
};

struct LfrParams {
  std::size_t n = 0;
  double tau1 = 3.0;
  double tau2 = 1.5;
  double mu = 0.1;
  double average_degree = 5.0;
  std::size_t min_community = 1;
};

/// A graph plus its planted node -> community map.
struct CommunityGraph {
  Graph graph;
  std::vector<std::uint32_t> community_of;
  std::size_t community_count() const {
    return community_of.empty() ? 0 : *std::max_element(community_of.begin(), community_of.end()) + 1;
  }
};

namespace detail {

inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace detail

inline void validate(const ErParams& p) {
  if (p.n < 1) throw InputError("er: n must be >= 1");
  detail::require_probability(p.edge_exist_prob, "er: edge_exist_prob");
}

inline void validate(const GaussianPartitionParams& p) {
  if (p.n < 1) throw InputError("gaussian_partition: n must be >= 1");
  if (!(p.s >= 1.0)) throw InputError("gaussian_partition: s must be >= 1");
  if (!(p.v > 0.0)) throw InputError("gaussian_partition: v must be > 0");
  detail::require_probability(p.p_in, "gaussian_partition: p_in");
  detail::require_probability(p.p_out, "gaussian_partition: p_out");
}

inline void validate(const LfrParams& p) {
  if (p.n < 2) throw InputError("lfr: n must be >= 2");
  if (!(p.tau1 > 1.0)) throw InputError("lfr: tau1 must be > 1");
  if (!(p.tau2 > 1.0)) throw InputError("lfr: tau2 must be > 1");
  if (!(p.mu > 0.0 && p.mu < 1.0)) throw InputError("lfr: mu must lie in (0, 1)");
  if (!(p.average_degree > 0.0)) throw InputError("lfr: average_degree must be > 0");
  if (p.min_community < 1 || p.min_community > p.n) throw InputError("lfr: min_community must lie in [1, n]");
}

/// G(n, p): every unordered pair independently with probability p.
inline Graph gen_er(const ErParams& params, std::uint64_t seed) {
  validate(params);
  Rng rng(seed);
  std::vector<Edge> edges;
  const double p = params.edge_exist_prob;
  for (NodeId u = 0; u < params.n; ++u) {
    for (NodeId v = u + 1; v < params.n; ++v) {
      if (bernoulli(rng, p)) edges.push_back({u, v});
    }
  }
  return build_graph(params.n, edges);
}

/// Community sizes drawn sequentially from Normal(s, s/v), rounded half-up and
/// clamped to >= 1, until they cover n; the last one is truncated.
inline std::vector<std::size_t> gaussian_partition_sizes(const GaussianPartitionParams& params, Rng& rng) {
  std::normal_distribution<double> size_dist(params.s, std::sqrt(params.s / params.v));
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  while (total < params.n) {
    double draw = std::floor(size_dist(rng) + 0.5);
    std::size_t size = draw < 1.0 ? 1 : static_cast<std::size_t>(draw);
    size = std::min(size, params.n - total);
    sizes.push_back(size);
    total += size;
  }
  return sizes;
}

inline CommunityGraph gen_gaussian_partition(const GaussianPartitionParams& params, std::uint64_t seed) {
  validate(params);
  Rng rng(seed);
  const auto sizes = gaussian_partition_sizes(params, rng);

  CommunityGraph out;
  out.community_of.reserve(params.n);
  for (std::uint32_t c = 0; c < sizes.size(); ++c) out.community_of.insert(out.community_of.end(), sizes[c], c);

  std::vector<Edge> edges;
  for (NodeId u = 0; u < params.n; ++u) {
    for (NodeId v = u + 1; v < params.n; ++v) {
      const double p = out.community_of[u] == out.community_of[v] ? params.p_in : params.p_out;
      if (bernoulli(rng, p)) edges.push_back({u, v});
    }
  }
  out.graph = build_graph(params.n, edges);
  return out;
}

// ---------------------------------------------------------------------------
// LFR benchmark

namespace detail {

/// Continuous power law x^-tau on [lo, hi], sampled by inverse CDF.
inline double sample_power_law(Rng& rng, double tau, double lo, double hi) {
  const double u = uniform01(rng);
  const double a = 1.0 - tau;
  const double lo_a = std::pow(lo, a);
  const double hi_a = std::pow(hi, a);
  return std::pow(lo_a + u * (hi_a - lo_a), 1.0 / a);
}

/// Mean of the continuous power law x^-tau on [lo, hi].
inline double power_law_mean(double tau, double lo, double hi) {
  auto antideriv = [](double e, double x) { return std::abs(e) < 1e-12 ? std::log(x) : std::pow(x, e) / e; };
  const double norm = antideriv(1.0 - tau, hi) - antideriv(1.0 - tau, lo);
  const double first = antideriv(2.0 - tau, hi) - antideriv(2.0 - tau, lo);
  return first / norm;
}

/// Lower cutoff for which the power law on [lo, hi] has the requested mean.
inline double solve_power_law_min(double tau, double target_mean, double hi) {
  double a = 1.0;
  double b = hi;
  if (power_law_mean(tau, a, hi) > target_mean) return a;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    if (power_law_mean(tau, mid, hi) < target_mean) a = mid;
    else b = mid;
  }
  return 0.5 * (a + b);
}

inline std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Wires stubs into a simple graph by configuration-model matching, then
/// repairs self-loops, multi-edges and forbidden pairs with double-edge swaps.
/// `allowed(a, b)` restricts which pairs may be joined; `existing` holds edges
/// placed earlier that must not be duplicated. Returns false when the budget
/// runs out before every bad pair is repaired.
template <typename Allowed>
bool wire_stubs(std::vector<NodeId> stubs, Rng& rng, Allowed allowed, std::unordered_set<std::uint64_t>& existing,
                std::vector<Edge>& out, std::size_t& budget) {
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::vector<Edge> good;
  std::vector<Edge> bad;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId a = stubs[i];
    const NodeId b = stubs[i + 1];
    if (a != b && allowed(a, b) && existing.insert(pair_key(a, b)).second) good.push_back({a, b});
    else bad.push_back({a, b});
  }
  while (!bad.empty()) {
    if (good.empty() || budget == 0) return false;
    --budget;
    const Edge e = bad.back();
    std::uniform_int_distribution<std::size_t> pick(0, good.size() - 1);
    const std::size_t j = pick(rng);
    Edge f = good[j];
    if (bernoulli(rng, 0.5)) std::swap(f.u, f.v);
    // (e.u, e.v) + (f.u, f.v) -> (e.u, f.u) + (e.v, f.v)
    const NodeId a1 = e.u, b1 = f.u, a2 = e.v, b2 = f.v;
    if (a1 == b1 || a2 == b2 || !allowed(a1, b1) || !allowed(a2, b2)) continue;
    const auto k1 = pair_key(a1, b1);
    const auto k2 = pair_key(a2, b2);
    if (k1 == k2 || existing.count(k1) || existing.count(k2)) continue;
    existing.erase(pair_key(f.u, f.v));
    existing.insert(k1);
    existing.insert(k2);
    good[j] = {a1, b1};
    good.push_back({a2, b2});
    bad.pop_back();
  }
  out.insert(out.end(), good.begin(), good.end());
  return true;
}

struct LfrAttempt {
  bool ok = false;
  std::string failure;
  CommunityGraph result;
};

inline LfrAttempt lfr_attempt(const LfrParams& p, Rng& rng, std::size_t& budget) {
  LfrAttempt attempt;
  const std::size_t n = p.n;
  const double max_degree = std::min(static_cast<double>(n - 1), std::floor(std::sqrt(static_cast<double>(n)) * p.average_degree));
  if (max_degree < p.average_degree) {
    attempt.failure = "average_degree exceeds the degree cap sqrt(n)*average_degree capped at n-1";
    return attempt;
  }

  // Degree sequence: power law with its lower cutoff tuned to hit the mean.
  const double min_degree = solve_power_law_min(p.tau1, p.average_degree, max_degree);
  std::vector<std::size_t> degree(n);
  for (auto& d : degree) {
    d = static_cast<std::size_t>(std::llround(sample_power_law(rng, p.tau1, min_degree, max_degree)));
    d = std::clamp<std::size_t>(d, 1, static_cast<std::size_t>(max_degree));
  }
  if (std::accumulate(degree.begin(), degree.end(), std::size_t{0}) % 2 == 1) {
    auto it = std::min_element(degree.begin(), degree.end());
    ++*it;
  }

  // Community sizes: power law on [min_community, max_community], summing to n.
  const std::size_t max_community = std::min(n, std::max(p.min_community, static_cast<std::size_t>(max_degree) + 1));
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  while (total < n) {
    const double draw = sample_power_law(rng, p.tau2, static_cast<double>(p.min_community), static_cast<double>(max_community) + 0.999);
    const std::size_t s = std::clamp<std::size_t>(static_cast<std::size_t>(draw), p.min_community, max_community);
    sizes.push_back(s);
    total += s;
  }
  std::size_t excess = total - n;
  // Trim the excess from communities above the minimum, largest first.
  for (std::size_t round = 0; excess > 0 && round < n; ++round) {
    auto it = std::max_element(sizes.begin(), sizes.end());
    if (*it <= p.min_community) break;
    const std::size_t take = std::min(excess, *it - p.min_community);
    *it -= take;
    excess -= take;
  }
  if (excess > 0) {
    attempt.failure = "community sizes cannot be trimmed to sum to n with every size >= min_community";
    return attempt;
  }
  const std::size_t communities = sizes.size();

  // Internal/external split, stochastically rounded so the expected mixing is mu.
  std::vector<std::size_t> internal(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (communities == 1) {
      internal[v] = degree[v];
      continue;
    }
    const double x = (1.0 - p.mu) * static_cast<double>(degree[v]);
    const double base = std::floor(x);
    internal[v] = static_cast<std::size_t>(base) + (bernoulli(rng, x - base) ? 1 : 0);
  }

  // Assign nodes to communities, most-demanding first, each to a random
  // community that still has room and is large enough for its internal degree.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return internal[a] > internal[b]; });
  std::vector<std::size_t> room = sizes;
  std::vector<std::uint32_t> community_of(n);
  std::vector<std::uint32_t> candidates;
  for (std::size_t v : order) {
    candidates.clear();
    for (std::uint32_t c = 0; c < communities; ++c) {
      if (room[c] > 0 && sizes[c] > internal[v]) candidates.push_back(c);
    }
    if (candidates.empty()) {
      attempt.failure = "a node's internal degree does not fit in any community (min_community too small for the degree cap)";
      return attempt;
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const std::uint32_t c = candidates[pick(rng)];
    community_of[v] = c;
    --room[c];
  }

  // Each community's internal stub total must be even.
  std::vector<std::vector<NodeId>> members(communities);
  for (NodeId v = 0; v < n; ++v) members[community_of[v]].push_back(v);
  for (auto& m : members) {
    std::size_t sum = 0;
    for (NodeId v : m) sum += internal[v];
    if (sum % 2 == 0) continue;
    bool fixed = false;
    for (NodeId v : m) {
      if (internal[v] < degree[v] && internal[v] + 1 < m.size()) {
        ++internal[v];
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      for (NodeId v : m) {
        if (internal[v] > 0) {
          --internal[v];
          fixed = true;
          break;
        }
      }
    }
    if (!fixed) {
      attempt.failure = "cannot balance internal stubs";
      return attempt;
    }
  }

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> existing;
  for (const auto& m : members) {
    std::vector<NodeId> stubs;
    for (NodeId v : m) stubs.insert(stubs.end(), internal[v], v);
    if (!wire_stubs(stubs, rng, [](NodeId, NodeId) { return true; }, existing, edges, budget)) {
      attempt.failure = "internal rewiring budget exhausted";
      return attempt;
    }
  }

  std::vector<NodeId> external_stubs;
  for (NodeId v = 0; v < n; ++v) external_stubs.insert(external_stubs.end(), degree[v] - internal[v], v);
  if (external_stubs.size() % 2 == 1) external_stubs.pop_back();
  if (communities > 1 && !external_stubs.empty()) {
    auto across = [&](NodeId a, NodeId b) { return community_of[a] != community_of[b]; };
    if (!wire_stubs(external_stubs, rng, across, existing, edges, budget)) {
      attempt.failure = "external rewiring budget exhausted";
      return attempt;
    }
  }

  attempt.result.graph = build_graph(n, edges);
  attempt.result.community_of = std::move(community_of);
  attempt.ok = true;
  return attempt;
}

}  // namespace detail

/// LFR benchmark graph (power-law degrees and community sizes, mixing mu).
/// Up to 100 whole constructions, each with 100*n swap-repair steps; throws
/// GenerationError naming the last violated constraint.
inline CommunityGraph gen_lfr(const LfrParams& params, std::uint64_t seed) {
  validate(params);
  Rng rng(seed);
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::size_t budget = 100 * params.n;
    auto result = detail::lfr_attempt(params, rng, budget);
    if (result.ok) return std::move(result.result);
    last_failure = result.failure;
  }
  throw GenerationError("lfr: " + last_failure);
}

/// Fraction of edge endpoints whose edge leaves the endpoint's community.
inline double mixing_fraction(const CommunityGraph& cg) {
  if (cg.graph.edge_count() == 0) return 0.0;
  std::size_t across = 0;
  for (const Edge& e : cg.graph.edges()) {
    if (cg.community_of[e.u] != cg.community_of[e.v]) ++across;
  }
  return static_cast<double>(across) / static_cast<double>(cg.graph.edge_count());
}

}  // namespace infodiff

#endif  // INFODIFF_GENERATORS_HPP
