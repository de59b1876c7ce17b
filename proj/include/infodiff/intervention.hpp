#ifndef INFODIFF_INTERVENTION_HPP
#define INFODIFF_INTERVENTION_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "infodiff/centrality.hpp"
#include "infodiff/diffusion.hpp"
#include "infodiff/errors.hpp"
#include "infodiff/graph.hpp"

namespace infodiff {

struct CombatParams {
  double p_f = 0.5;  // false transmission probability
  double p_t = 0.4;  // true transmission probability
  double t_d = 0.5;  // decisive threshold on p_if
  double t_c = 0.1;  // comparative threshold on p_if - p_it
};

inline void validate(const CombatParams& p) {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(p.p_f) || !in_unit(p.p_t)) throw InputError("transmission probabilities must lie in [0, 1]");
  if (!(p.t_d >= 0.0) || !in_unit(p.t_c)) throw InputError("thresholds must be non-negative (t_c at most 1)");
}

enum class Process { False, True };

/// One layer update in the interleaved timeline.
struct StepEvent {
  std::size_t step;
  Process process;
  std::size_t layer;
};

struct CombatState {
  std::vector<double> p_if;
  std::vector<double> p_it;
  std::vector<double> p_if_bar;
  std::vector<double> p_it_bar;
  LayeredView false_layers;
  LayeredView true_layers;
  std::vector<bool> blocked;
  std::vector<NodeLabel> labels;
  std::vector<StepEvent> steps;
};

/// Three-way status of a node once both messages have spread.
inline NodeLabel determine_combat_label(double p_if, double p_it, double t_c) {
  if (p_if - p_it >= t_c) return NodeLabel::Infected;
  if (p_if >= p_it) return NodeLabel::Susceptible;
  return NodeLabel::Protected;
}

/// Competing false/true diffusion.
///
/// Global step t updates false layer t first, then true layer t-1, so the
/// false message always runs one iteration ahead. A node whose p_if has
/// reached t_d when the true message arrives is blocked (p_it stays 0), and
/// any node at or above t_d no longer passes the true message on.
inline CombatState run_intervention(const Graph& g, std::span<const NodeId> ic_f, std::span<const NodeId> ic_t,
                                    const CombatParams& params) {
  validate(params);
  if (ic_f.empty()) throw InputError("false information creator set is empty");
  if (ic_t.empty()) throw InputError("true information creator set is empty");
  CombatState s;
  s.false_layers = layer_from_sources(g, ic_f);
  s.true_layers = layer_from_sources(g, ic_t);
  detail::init_beliefs(g.node_count(), s.false_layers.sources(), s.p_if, s.p_if_bar);
  detail::init_beliefs(g.node_count(), s.true_layers.sources(), s.p_it, s.p_it_bar);
  s.blocked.assign(g.node_count(), false);

  const auto always = [](NodeId) { return true; };
  const auto below_decisive = [&](NodeId v) { return s.p_if[v] < params.t_d; };
  const auto receive_true = [&](NodeId u) {
    if (s.p_if[u] >= params.t_d) {
      s.blocked[u] = true;
      return false;
    }
    return true;
  };

  const std::size_t last_step = std::max(s.false_layers.depth(), s.true_layers.depth() + 1);
  for (std::size_t t = 1; t <= last_step; ++t) {
    if (detail::update_layer(g, s.false_layers, t, params.p_f, s.p_if, s.p_if_bar, always, always)) {
      s.steps.push_back({t, Process::False, t});
    }
    if (detail::update_layer(g, s.true_layers, t - 1, params.p_t, s.p_it, s.p_it_bar, below_decisive, receive_true)) {
      s.steps.push_back({t, Process::True, t - 1});
    }
  }

  s.labels.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) s.labels[v] = determine_combat_label(s.p_if[v], s.p_it[v], params.t_c);
  return s;
}

inline CombatState run_intervention(const Graph& g, const std::vector<NodeId>& ic_f, const std::vector<NodeId>& ic_t,
                                    const CombatParams& params) {
  return run_intervention(g, std::span<const NodeId>(ic_f), std::span<const NodeId>(ic_t), params);
}

struct InterventionMetrics {
  double sum_p_it = 0.0;
  double sum_p_if = 0.0;
  std::size_t infected = 0;
  std::size_t susceptible = 0;
  std::size_t protected_count = 0;
  std::size_t steps = 0;
};

inline InterventionMetrics intervention_metrics(const CombatState& s) {
  InterventionMetrics m;
  m.sum_p_it = detail::belief_sum(s.p_it);
  m.sum_p_if = detail::belief_sum(s.p_if);
  for (NodeLabel l : s.labels) {
    switch (l) {
      case NodeLabel::Infected: ++m.infected; break;
      case NodeLabel::Susceptible: ++m.susceptible; break;
      case NodeLabel::Protected: ++m.protected_count; break;
    }
  }
  m.steps = s.steps.empty() ? 0 : s.steps.back().step;
  return m;
}

/// One ensemble member for the minimum-seed search: a graph and its fixed
/// false creators.
struct InterventionScenario {
  const Graph* graph;
  std::vector<NodeId> ic_f;
  std::uint64_t random_seed;  // used only by CentralityKind::Random
};

struct MinSeedSearch {
  std::optional<std::size_t> k;
  /// (mean protected, mean infected) for k = 1, 2, ... in order.
  std::vector<std::pair<double, double>> curve;
};

/// Smallest k in 1..k_max for which the ensemble-mean number of protected
/// nodes strictly exceeds the mean number of infected nodes when the true
/// creators are the top-k nodes of `strategy`. The curve stops at that k
/// (or runs to k_max when no k qualifies).
inline MinSeedSearch minimum_true_seeds(std::span<const InterventionScenario> ensemble, CentralityKind strategy,
                                        const CombatParams& params, std::size_t k_max) {
  if (ensemble.empty()) throw InputError("minimum_true_seeds: empty ensemble");
  for (const auto& sc : ensemble) {
    if (k_max > sc.graph->node_count()) throw InputError("minimum_true_seeds: k_max exceeds node count");
  }
  // A top-(k+1) ranking extends the top-k one, so one ranking per graph serves every k.
  std::vector<std::vector<NodeId>> ranking;
  ranking.reserve(ensemble.size());
  for (const auto& sc : ensemble) ranking.push_back(select_seeds(*sc.graph, strategy, k_max, sc.random_seed));

  MinSeedSearch out;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double protected_total = 0.0;
    double infected_total = 0.0;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      const std::vector<NodeId> ic_t(ranking[i].begin(), ranking[i].begin() + static_cast<std::ptrdiff_t>(k));
      const auto m = intervention_metrics(run_intervention(*ensemble[i].graph, ensemble[i].ic_f, ic_t, params));
      protected_total += static_cast<double>(m.protected_count);
      infected_total += static_cast<double>(m.infected);
    }
    const double count = static_cast<double>(ensemble.size());
    out.curve.emplace_back(protected_total / count, infected_total / count);
    if (protected_total > infected_total) {
      out.k = k;
      break;
    }
  }
  return out;
}

}  // namespace infodiff

#endif  // INFODIFF_INTERVENTION_HPP
