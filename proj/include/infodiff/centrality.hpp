#ifndef INFODIFF_CENTRALITY_HPP
#define INFODIFF_CENTRALITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "infodiff/errors.hpp"
#include "infodiff/graph.hpp"
#include "infodiff/rng.hpp"

namespace infodiff {

enum class CentralityKind { Degree, Eigenvector, Closeness, Betweenness, PageRank, Random };

inline constexpr std::array<CentralityKind, 6> kAllStrategies = {
    CentralityKind::Degree,      CentralityKind::Eigenvector, CentralityKind::Closeness,
    CentralityKind::Betweenness, CentralityKind::PageRank,    CentralityKind::Random};

inline constexpr std::array<CentralityKind, 5> kCentralityMeasures = {
    CentralityKind::Degree, CentralityKind::Eigenvector, CentralityKind::Closeness, CentralityKind::Betweenness,
    CentralityKind::PageRank};

inline std::string_view to_string(CentralityKind kind) {
  switch (kind) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::Eigenvector: return "eigenvector";
    case CentralityKind::Closeness: return "closeness";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::PageRank: return "pagerank";
    case CentralityKind::Random: return "random";
  }
  return "?";
}

inline CentralityKind parse_centrality_kind(std::string_view name) {
  for (CentralityKind k : kAllStrategies) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown strategy '" + std::string(name) +
                   "' (expected degree, eigenvector, closeness, betweenness, pagerank or random)");
}

struct CentralityScores {
  CentralityKind kind = CentralityKind::Degree;
  std::vector<double> score;
};

struct PowerIterationOptions {
  double tol;
  std::size_t max_iter;
};

inline constexpr PowerIterationOptions kEigenvectorDefaults{1e-8, 1000};
inline constexpr PowerIterationOptions kPageRankDefaults{1e-10, 10000};
inline constexpr double kDefaultDamping = 0.85;

inline CentralityScores degree_centrality(const Graph& g) {
  CentralityScores out{CentralityKind::Degree, std::vector<double>(g.node_count())};
  for (NodeId v = 0; v < g.node_count(); ++v) out.score[v] = static_cast<double>(g.degree(v));
  return out;
}

/// Dominant adjacency eigenvector, unit 2-norm, by power iteration on the
/// shifted operator A + I (same eigenvectors as A, and no oscillation on
/// bipartite graphs). On a disconnected graph the iterate concentrates on the
/// component(s) with the largest spectral radius.
inline CentralityScores eigenvector_centrality(const Graph& g, PowerIterationOptions opts = kEigenvectorDefaults) {
  if (g.edge_count() == 0) throw NumericError("eigenvector centrality is undefined on a graph without edges");
  const std::size_t n = g.node_count();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    for (NodeId v = 0; v < n; ++v) {
      double acc = x[v];
      for (NodeId w : g.neighbors(v)) acc += x[w];
      next[v] = acc;
    }
    const double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
    double diff = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      diff = std::max(diff, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (diff < opts.tol) return {CentralityKind::Eigenvector, std::move(x)};
  }
  throw NumericError("eigenvector centrality did not converge in " + std::to_string(opts.max_iter) + " iterations",
                     std::move(x));
}

namespace detail {

/// BFS hop distances from `source`, -1 when unreachable.
inline void bfs_distances(const Graph& g, NodeId source, std::vector<std::int32_t>& dist, std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
}

}  // namespace detail

/// Closeness with Wasserman-Faust component scaling:
/// ((r-1)/(n-1)) * ((r-1) / sum of distances to the r-1 reachable nodes).
inline CentralityScores closeness_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  CentralityScores out{CentralityKind::Closeness, std::vector<double>(n, 0.0)};
  if (n < 2) return out;
  std::vector<std::int32_t> dist(n);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    detail::bfs_distances(g, v, dist, queue);
    const double reached = static_cast<double>(queue.size() - 1);
    if (reached == 0) continue;
    double total = 0.0;
    for (NodeId w : queue) total += dist[w];
    out.score[v] = (reached / static_cast<double>(n - 1)) * (reached / total);
  }
  return out;
}

/// Brandes betweenness, unnormalized, each unordered pair counted once.
inline CentralityScores betweenness_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  CentralityScores out{CentralityKind::Betweenness, std::vector<double>(n, 0.0)};
  std::vector<std::int32_t> dist(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (std::size_t i = order.size(); i-- > 1;) {
      const NodeId w = order[i];
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      out.score[w] += delta[w];
    }
  }
  for (double& b : out.score) b *= 0.5;
  return out;
}

/// PageRank on the undirected random walk with uniform teleport; isolated
/// nodes spread their mass uniformly. Converged when the L1 change < tol.
inline CentralityScores pagerank(const Graph& g, double damping = kDefaultDamping,
                                 PowerIterationOptions opts = kPageRankDefaults) {
  const std::size_t n = g.node_count();
  if (n == 0) return {CentralityKind::PageRank, {}};
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, inv_n);
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) == 0) dangling += x[v];
    }
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (NodeId w : g.neighbors(v)) acc += x[w] / static_cast<double>(g.degree(w));
      next[v] = base + damping * acc;
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double err = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= total;
      err += std::abs(next[v] - x[v]);
    }
    x.swap(next);
    if (err < opts.tol) return {CentralityKind::PageRank, std::move(x)};
  }
  throw NumericError("pagerank did not converge in " + std::to_string(opts.max_iter) + " iterations", std::move(x));
}

/// Scores for any non-random kind with default options.
inline CentralityScores compute_centrality(const Graph& g, CentralityKind kind) {
  switch (kind) {
    case CentralityKind::Degree: return degree_centrality(g);
    case CentralityKind::Eigenvector: return eigenvector_centrality(g);
    case CentralityKind::Closeness: return closeness_centrality(g);
    case CentralityKind::Betweenness: return betweenness_centrality(g);
    case CentralityKind::PageRank: return pagerank(g);
    case CentralityKind::Random: break;
  }
  throw InputError("random strategy has no centrality scores");
}

/// The k highest-scoring nodes, ties broken by ascending node index.
inline std::vector<NodeId> top_k(const CentralityScores& scores, std::size_t k) {
  const std::size_t n = scores.score.size();
  if (k > n) throw InputError("k = " + std::to_string(k) + " exceeds node count " + std::to_string(n));
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](NodeId a, NodeId b) {
    if (scores.score[a] != scores.score[b]) return scores.score[a] > scores.score[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), better);
  order.resize(k);
  return order;
}

/// k distinct nodes uniformly at random (partial Fisher-Yates).
inline std::vector<NodeId> random_nodes(std::size_t node_count, std::size_t k, std::uint64_t seed) {
  if (k > node_count) {
    throw InputError("k = " + std::to_string(k) + " exceeds node count " + std::to_string(node_count));
  }
  Rng rng(seed);
  std::vector<NodeId> pool(node_count);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, node_count - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

/// Information-creator selection: top-k by the given centrality, or k
/// uniform nodes for CentralityKind::Random (the only case using `seed`).
inline std::vector<NodeId> select_seeds(const Graph& g, CentralityKind kind, std::size_t k, std::uint64_t seed) {
  if (k > g.node_count()) {
    throw InputError("k = " + std::to_string(k) + " exceeds node count " + std::to_string(g.node_count()));
  }
  if (k == 0) return {};
  if (kind == CentralityKind::Random) return random_nodes(g.node_count(), k, seed);
  return top_k(compute_centrality(g, kind), k);
}

}  // namespace infodiff

#endif  // INFODIFF_CENTRALITY_HPP
