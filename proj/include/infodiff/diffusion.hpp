#ifndef INFODIFF_DIFFUSION_HPP
#define INFODIFF_DIFFUSION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infodiff/errors.hpp"
#include "infodiff/graph.hpp"

namespace infodiff {

struct DiffusionParams {
  double transmission_prob = 0.5;  // P
  double threshold = 0.5;          // T
};

inline void validate(const DiffusionParams& p) {
  if (!(p.transmission_prob >= 0.0 && p.transmission_prob <= 1.0)) throw InputError("transmission probability must lie in [0, 1]");
  if (!(p.threshold >= 0.0 && p.threshold <= 1.0)) throw InputError("threshold must lie in [0, 1]");
}

enum class NodeLabel { Infected, Susceptible, Protected };

inline std::string_view to_string(NodeLabel label) {
  switch (label) {
    case NodeLabel::Infected: return "Infected";
    case NodeLabel::Susceptible: return "Susceptible";
    case NodeLabel::Protected: return "Protected";
  }
  return "?";
}

/// Belief a target gains from one source in the previous layer.
///
/// With N effective edges (co-layer neighbors of the target that also touch
/// the source) the direct transmission p*P is boosted by
///   sum_{n=1..N} p * P^n * (1-P)^(N+1-n) * C(N,n) * (1 - (1-P)^n).
/// The result never exceeds p.
inline double update_from_source(double source_belief, double transmission_prob, std::size_t n_effective) {
  const double P = transmission_prob;
  double result = source_belief * P;
  if (n_effective == 0 || source_belief == 0.0 || P <= 0.0 || P >= 1.0) return result;

  // Binomial pmf C(N,n) P^n (1-P)^(N-n), built in log space to stay finite for large N.
  const double N = static_cast<double>(n_effective);
  const double log_p = std::log(P);
  const double log_q = std::log1p(-P);
  const double log_n_fact = std::lgamma(N + 1.0);
  double boost = 0.0;
  for (std::size_t n = 1; n <= n_effective; ++n) {
    const double k = static_cast<double>(n);
    const double log_pmf = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0) + k * log_p + (N - k) * log_q;
    boost += std::exp(log_pmf) * -std::expm1(k * log_q);
  }
  // rounding in the log-space sum can overshoot the exact bound by an ulp or two
  return std::min(source_belief, result + source_belief * (1.0 - P) * boost);
}

struct DiffusionState {
  std::vector<double> p_i;
  std::vector<double> p_i_bar;
  LayeredView layers;
  std::size_t iterations_run = 0;
  std::vector<NodeLabel> labels;
};

/// Infected iff p_i >= threshold.
inline std::vector<NodeLabel> label_nodes(std::span<const double> p_i, double threshold) {
  std::vector<NodeLabel> labels(p_i.size());
  for (std::size_t v = 0; v < p_i.size(); ++v) labels[v] = p_i[v] >= threshold ? NodeLabel::Infected : NodeLabel::Susceptible;
  return labels;
}

inline std::vector<NodeLabel> label_nodes(const DiffusionState& state, double threshold) {
  return label_nodes(std::span<const double>(state.p_i), threshold);
}

namespace detail {

/// One layered update: every node of layer `target_layer` folds in the
/// contribution of each of its neighbors in the layer below, in the
/// complement domain. `may_transmit(v)` filters sources, `may_receive(u)`
/// filters targets. Returns false if the layer does not exist.
template <typename MayTransmit, typename MayReceive>
bool update_layer(const Graph& g, const LayeredView& lv, std::size_t target_layer, double P, std::vector<double>& p,
                  std::vector<double>& p_bar, MayTransmit may_transmit, MayReceive may_receive) {
  if (target_layer == 0 || target_layer > lv.depth()) return false;
  const auto& layer_of = lv.layer_index();
  const auto source_layer = static_cast<std::int32_t>(target_layer - 1);
  for (NodeId u : lv.nodes_at(target_layer)) {
    if (!may_receive(u)) continue;
    for (NodeId v : g.neighbors(u)) {
      if (layer_of[v] != source_layer || p[v] == 0.0 || !may_transmit(v)) continue;
      const double gain = update_from_source(p[v], P, effective_edge_count(g, lv, u, v));
      p_bar[u] *= 1.0 - gain;
      p[u] = 1.0 - p_bar[u];
    }
  }
  return true;
}

inline void init_beliefs(std::size_t n, std::span<const NodeId> seeds, std::vector<double>& p, std::vector<double>& p_bar) {
  p.assign(n, 0.0);
  p_bar.assign(n, 1.0);
  for (NodeId s : seeds) {
    p[s] = 1.0;
    p_bar[s] = 0.0;
  }
}

}  // namespace detail

/// Layered single-message diffusion from the information creators `ic`.
/// Each reachable layer is updated once, from the layer before it; nodes not
/// reachable from any creator keep p_i = 0.
inline DiffusionState run_single_diffusion(const Graph& g, std::span<const NodeId> ic, const DiffusionParams& params) {
  validate(params);
  DiffusionState state;
  state.layers = layer_from_sources(g, ic);
  detail::init_beliefs(g.node_count(), state.layers.sources(), state.p_i, state.p_i_bar);
  const auto always = [](NodeId) { return true; };
  for (std::size_t layer = 1; layer <= state.layers.depth(); ++layer) {
    detail::update_layer(g, state.layers, layer, params.transmission_prob, state.p_i, state.p_i_bar, always, always);
  }
  state.iterations_run = state.layers.depth();
  state.labels = label_nodes(state, params.threshold);
  return state;
}

inline DiffusionState run_single_diffusion(const Graph& g, const std::vector<NodeId>& ic, const DiffusionParams& params) {
  return run_single_diffusion(g, std::span<const NodeId>(ic), params);
}

struct DiffusionMetrics {
  std::size_t iterations = 0;
  double sum_p_i = 0.0;
  std::size_t infected = 0;
};

namespace detail {

// Sums in ascending order so the total does not depend on node labelling;
// paired comparisons on symmetric graphs then see exact ties.
inline double belief_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace detail

inline DiffusionMetrics diffusion_metrics(const DiffusionState& state) {
  DiffusionMetrics m;
  m.iterations = state.iterations_run;
  m.sum_p_i = detail::belief_sum(state.p_i);
  for (NodeLabel l : state.labels) m.infected += l == NodeLabel::Infected ? 1 : 0;
  return m;
}

}  // namespace infodiff

#endif  // INFODIFF_DIFFUSION_HPP
