#ifndef INFODIFF_GRAPH_HPP
#define INFODIFF_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "infodiff/errors.hpp"

namespace infodiff {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph over nodes 0..n-1.
///
/// Adjacency lists are sorted, symmetric and free of self-loops and
/// duplicates. Construction goes through build_graph(), which normalizes
/// whatever edge list it is handed.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_edge(NodeId a, NodeId b) const {
    const auto& adj = adjacency_[a];
    return std::binary_search(adj.begin(), adj.end(), b);
  }

  /// Canonical edge list: u < v, lexicographically sorted.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend Graph build_graph(std::size_t node_count, std::span<const Edge> edge_list);

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
};

/// Builds a simple graph; duplicate edges (in either orientation) and
/// self-loops are dropped. Throws InputError on an out-of-range endpoint.
inline Graph build_graph(std::size_t node_count, std::span<const Edge> edge_list) {
  Graph g;
  g.edges_.reserve(edge_list.size());
  for (const Edge& e : edge_list) {
    if (e.u >= node_count || e.v >= node_count) {
      std::ostringstream msg;
      msg << "edge (" << e.u << ", " << e.v << ") has an endpoint outside [0, " << node_count << ")";
      throw InputError(msg.str());
    }
    if (e.u == e.v) continue;
    g.edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  std::vector<std::size_t> deg(node_count, 0);
  for (const Edge& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.adjacency_.resize(node_count);
  for (std::size_t v = 0; v < node_count; ++v) g.adjacency_[v].reserve(deg[v]);
  for (const Edge& e : g.edges_) {
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

inline Graph build_graph(std::size_t node_count, std::initializer_list<Edge> edge_list) {
  return build_graph(node_count, std::span<const Edge>(edge_list.begin(), edge_list.size()));
}

inline Graph build_graph(std::size_t node_count, const std::vector<Edge>& edge_list) {
  return build_graph(node_count, std::span<const Edge>(edge_list));
}

/// Multi-source BFS layering: layer(v) is the hop distance from v to the
/// nearest source. Unreachable nodes carry no layer.
class LayeredView {
 public:
  static constexpr std::int32_t kUnreached = -1;

  LayeredView() = default;

  std::optional<std::size_t> layer(NodeId v) const {
    if (layer_of_[v] == kUnreached) return std::nullopt;
    return static_cast<std::size_t>(layer_of_[v]);
  }
  bool reached(NodeId v) const { return layer_of_[v] != kUnreached; }
  /// Raw per-node layer index, kUnreached for nodes outside the sources' components.
  const std::vector<std::int32_t>& layer_index() const noexcept { return layer_of_; }

  const std::vector<std::vector<NodeId>>& layers() const noexcept { return layers_; }
  std::span<const NodeId> nodes_at(std::size_t layer) const { return layers_[layer]; }
  const std::vector<NodeId>& sources() const noexcept { return sources_; }

  /// Largest layer index among reachable nodes.
  std::size_t depth() const noexcept { return layers_.empty() ? 0 : layers_.size() - 1; }

  friend LayeredView layer_from_sources(const Graph& g, std::span<const NodeId> sources);

 private:
  std::vector<NodeId> sources_;
  std::vector<std::int32_t> layer_of_;
  std::vector<std::vector<NodeId>> layers_;
};

inline LayeredView layer_from_sources(const Graph& g, std::span<const NodeId> sources) {
  if (sources.empty()) throw InputError("source set is empty");
  LayeredView lv;
  lv.layer_of_.assign(g.node_count(), LayeredView::kUnreached);

  std::vector<NodeId> frontier;
  for (NodeId s : sources) {
    if (s >= g.node_count()) throw InputError("source node " + std::to_string(s) + " out of range");
    if (lv.layer_of_[s] == 0) continue;
    lv.layer_of_[s] = 0;
    frontier.push_back(s);
  }
  std::sort(frontier.begin(), frontier.end());
  lv.sources_ = frontier;

  std::int32_t level = 0;
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      for (NodeId w : g.neighbors(v)) {
        if (lv.layer_of_[w] != LayeredView::kUnreached) continue;
        lv.layer_of_[w] = level + 1;
        next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end());
    lv.layers_.push_back(std::move(frontier));
    frontier = std::move(next);
    ++level;
  }
  return lv;
}

inline LayeredView layer_from_sources(const Graph& g, std::initializer_list<NodeId> sources) {
  return layer_from_sources(g, std::span<const NodeId>(sources.begin(), sources.size()));
}

inline LayeredView layer_from_sources(const Graph& g, const std::vector<NodeId>& sources) {
  return layer_from_sources(g, std::span<const NodeId>(sources));
}

/// Number of effective edges for `target` receiving from `source`: co-layer
/// neighbors of the target that are also adjacent to the source (closed
/// triplets). Requires layer(target) == layer(source) + 1 and an edge between
/// them; throws ContractError otherwise.
inline std::size_t effective_edge_count(const Graph& g, const LayeredView& lv, NodeId target,
                                        NodeId source) {
  const auto& layer = lv.layer_index();
  if (target >= g.node_count() || source >= g.node_count() || layer[source] == LayeredView::kUnreached ||
      layer[target] != layer[source] + 1 || !g.has_edge(target, source)) {
    throw ContractError("effective_edge_count needs an edge from layer L to layer L+1");
  }
  const std::int32_t target_layer = layer[target];
  auto a = g.neighbors(target);
  auto b = g.neighbors(source);
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      if (layer[*ia] == target_layer) ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m" header, then m lines "u v", 0-based.

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline Graph read_edge_list(std::istream& in) {
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw InputError("edge list: bad header, expected 'n m'");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1;
    long long v = -1;
    if (!(in >> u >> v)) throw InputError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InputError("edge list: line " + std::to_string(i + 2) + " endpoint out of range");
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  std::string rest;
  if (in >> rest) throw InputError("edge list: trailing data after " + std::to_string(m) + " edges");
  return build_graph(static_cast<std::size_t>(n), edges);
}

inline void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_edge_list(out, g);
  if (!out) throw IoError("write failed on '" + path + "'");
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_edge_list(in);
}

/// Community file: one "node community_id" line per node.
inline void write_communities(std::ostream& out, std::span<const std::uint32_t> community_of) {
  for (std::size_t v = 0; v < community_of.size(); ++v) out << v << ' ' << community_of[v] << '\n';
}

}  // namespace infodiff

#endif  // INFODIFF_GRAPH_HPP
