#ifndef INFODIFF_HARNESS_HPP
#define INFODIFF_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "infodiff/centrality.hpp"
#include "infodiff/diffusion.hpp"
#include "infodiff/errors.hpp"
#include "infodiff/generators.hpp"
#include "infodiff/graph.hpp"
#include "infodiff/intervention.hpp"
#include "infodiff/rng.hpp"
#include "infodiff/stats.hpp"

namespace infodiff {

using GeneratorParams = std::variant<ErParams, GaussianPartitionParams, LfrParams>;

enum class ExperimentMode { Single, Intervention, MinTrueSeeds };
enum class Scale { Paper, Desk };

struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string name = "experiment";
  GeneratorParams generator = ErParams{1000, 0.04};
  std::size_t ensemble_size = 50;
  ExperimentMode mode = ExperimentMode::Single;
  std::vector<CentralityKind> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  std::size_t info_starter = 3;
  std::size_t false_info_starter = 3;
  std::size_t true_info_starter = 10;
  DiffusionParams diffusion{0.5, 0.5};
  CombatParams combat{0.5, 0.4, 0.4, 0.1};
  std::optional<Sweep> sweep;
  std::size_t k_max = 40;
  std::uint64_t master_seed = 1;
};

/// One (strategy, graph, sweep point) run. In single mode sum_p_i is the
/// belief sum and iterations the layer count; in intervention mode sum_p_i
/// holds the false-belief sum and iterations the global step count.
struct RunRecord {
  CentralityKind strategy = CentralityKind::Random;
  std::size_t graph_index = 0;
  std::optional<double> sweep_value;
  std::size_t iterations = 0;
  double sum_p_i = 0.0;
  double sum_p_it = 0.0;
  std::size_t infected = 0;
  std::size_t susceptible = 0;
  std::size_t protected_count = 0;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct StrategyComparison {
  CentralityKind strategy = CentralityKind::Degree;
  std::optional<double> sweep_value;
  std::string metric;
  bool degenerate = false;
  WilcoxonResult test;
};

struct Provenance {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> graph_seeds;
  std::string timestamp;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;
  std::vector<StrategyComparison> comparisons;
  Provenance provenance;
};

// Seed streams; each is an independent key under the master seed.
inline constexpr std::uint64_t kGraphStream = 1;
inline constexpr std::uint64_t kRandomStrategyStream = 2;
inline constexpr std::uint64_t kFalseCreatorStream = 3;

inline std::uint64_t graph_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(master, {kGraphStream, index});
}

// ---------------------------------------------------------------------------
// Config JSON

inline std::string_view to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Single: return "single";
    case ExperimentMode::Intervention: return "intervention";
    case ExperimentMode::MinTrueSeeds: return "min_true_seeds";
  }
  return "?";
}

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw InputError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config: key '") + key + "' has the wrong type");
  }
}

inline json generator_to_json(const GeneratorParams& gp) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ErParams>) {
          return {{"type", "er"}, {"n", p.n}, {"edge_exist_prob", p.edge_exist_prob}};
        } else if constexpr (std::is_same_v<T, GaussianPartitionParams>) {
          return {{"type", "gaussian_partition"}, {"n", p.n},       {"s", p.s},
                  {"v", p.v},                     {"p_in", p.p_in}, {"p_out", p.p_out}};
        } else {
          return {{"type", "lfr"},          {"n", p.n},   {"tau1", p.tau1}, {"tau2", p.tau2},
                  {"mu", p.mu},             {"average_degree", p.average_degree},
                  {"min_community", p.min_community}};
        }
      },
      gp);
}

inline GeneratorParams generator_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InputError("config: generator needs a 'type'");
  const auto type = get_or<std::string>(j, "type", "");
  if (type == "er") {
    reject_unknown_keys(j, {"type", "n", "edge_exist_prob"}, "generator");
    return ErParams{get_or<std::size_t>(j, "n", 1000), get_or<double>(j, "edge_exist_prob", 0.04)};
  }
  if (type == "gaussian_partition") {
    reject_unknown_keys(j, {"type", "n", "s", "v", "p_in", "p_out"}, "generator");
    return GaussianPartitionParams{get_or<std::size_t>(j, "n", 1000), get_or<double>(j, "s", 40.0),
                                   get_or<double>(j, "v", 40.0), get_or<double>(j, "p_in", 0.1),
                                   get_or<double>(j, "p_out", 0.001)};
  }
  if (type == "lfr") {
    reject_unknown_keys(j, {"type", "n", "tau1", "tau2", "mu", "average_degree", "min_community"}, "generator");
    return LfrParams{get_or<std::size_t>(j, "n", 1000),       get_or<double>(j, "tau1", 3.0),
                     get_or<double>(j, "tau2", 1.5),          get_or<double>(j, "mu", 0.1),
                     get_or<double>(j, "average_degree", 5.0), get_or<std::size_t>(j, "min_community", 50)};
  }
  throw InputError("config: generator.type must be er, gaussian_partition or lfr");
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["generator"] = detail::generator_to_json(c.generator);
  j["ensemble_size"] = c.ensemble_size;
  j["mode"] = std::string(to_string(c.mode));
  j["strategies"] = nlohmann::json::array();
  for (auto k : c.strategies) j["strategies"].push_back(std::string(to_string(k)));
  j["info_starter"] = c.info_starter;
  j["false_info_starter"] = c.false_info_starter;
  j["true_info_starter"] = c.true_info_starter;
  j["diffusion"] = {{"transmission_prob", c.diffusion.transmission_prob}, {"threshold", c.diffusion.threshold}};
  j["combat"] = {{"p_f", c.combat.p_f}, {"p_t", c.combat.p_t}, {"t_d", c.combat.t_d}, {"t_c", c.combat.t_c}};
  if (c.sweep) j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
  j["k_max"] = c.k_max;
  j["master_seed"] = c.master_seed;
  return j;
}

inline const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names = {"transmission_prob", "threshold", "p_f",   "p_t",  "t_d",
                                                 "t_c",               "edge_exist_prob", "v", "s", "p_in",
                                                 "p_out",             "mu"};
  return names;
}

inline bool is_generator_parameter(const std::string& name) {
  return name == "edge_exist_prob" || name == "v" || name == "s" || name == "p_in" || name == "p_out" || name == "mu";
}

inline void validate(const ExperimentConfig& c) {
  if (c.ensemble_size < 1) throw InputError("config: ensemble_size must be >= 1");
  if (c.strategies.empty()) throw InputError("config: strategies must not be empty");
  std::visit([](const auto& p) { validate(p); }, c.generator);
  validate(c.diffusion);
  validate(c.combat);
  const std::size_t n = std::visit([](const auto& p) { return p.n; }, c.generator);
  if (c.mode == ExperimentMode::Single && (c.info_starter < 1 || c.info_starter > n)) {
    throw InputError("config: info_starter must lie in [1, n]");
  }
  if (c.mode != ExperimentMode::Single && (c.false_info_starter < 1 || c.false_info_starter > n)) {
    throw InputError("config: false_info_starter must lie in [1, n]");
  }
  if (c.mode == ExperimentMode::Intervention && (c.true_info_starter < 1 || c.true_info_starter > n)) {
    throw InputError("config: true_info_starter must lie in [1, n]");
  }
  if (c.mode == ExperimentMode::MinTrueSeeds && (c.k_max < 1 || c.k_max > n)) {
    throw InputError("config: k_max must lie in [1, n]");
  }
  if (c.sweep) {
    if (c.sweep->values.empty()) throw InputError("config: sweep grid is empty");
    const auto& names = sweepable_parameters();
    if (std::find(names.begin(), names.end(), c.sweep->parameter) == names.end()) {
      throw InputError("config: cannot sweep '" + c.sweep->parameter + "'");
    }
    if (c.mode == ExperimentMode::MinTrueSeeds) throw InputError("config: min_true_seeds mode does not take a sweep");
  }
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::get_or;
  if (!j.is_object()) throw InputError("config: top level must be an object");
  detail::reject_unknown_keys(j,
                              {"name", "generator", "ensemble_size", "mode", "strategies", "info_starter",
                               "false_info_starter", "true_info_starter", "diffusion", "combat", "sweep", "k_max",
                               "master_seed"},
                              "config");
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", c.name);
  if (!j.contains("generator")) throw InputError("config: missing 'generator'");
  c.generator = detail::generator_from_json(j.at("generator"));
  c.ensemble_size = get_or<std::size_t>(j, "ensemble_size", c.ensemble_size);
  const auto mode = get_or<std::string>(j, "mode", "single");
  if (mode == "single") c.mode = ExperimentMode::Single;
  else if (mode == "intervention") c.mode = ExperimentMode::Intervention;
  else if (mode == "min_true_seeds") c.mode = ExperimentMode::MinTrueSeeds;
  else throw InputError("config: mode must be single, intervention or min_true_seeds");
  if (j.contains("strategies")) {
    c.strategies.clear();
    for (const auto& s : j.at("strategies")) {
      if (!s.is_string()) throw InputError("config: strategies must be strings");
      c.strategies.push_back(parse_centrality_kind(s.get<std::string>()));
    }
  }
  c.info_starter = get_or<std::size_t>(j, "info_starter", c.info_starter);
  c.false_info_starter = get_or<std::size_t>(j, "false_info_starter", c.false_info_starter);
  c.true_info_starter = get_or<std::size_t>(j, "true_info_starter", c.true_info_starter);
  if (j.contains("diffusion")) {
    const auto& d = j.at("diffusion");
    detail::reject_unknown_keys(d, {"transmission_prob", "threshold"}, "diffusion");
    c.diffusion.transmission_prob = get_or<double>(d, "transmission_prob", c.diffusion.transmission_prob);
    c.diffusion.threshold = get_or<double>(d, "threshold", c.diffusion.threshold);
  }
  if (j.contains("combat")) {
    const auto& d = j.at("combat");
    detail::reject_unknown_keys(d, {"p_f", "p_t", "t_d", "t_c"}, "combat");
    c.combat.p_f = get_or<double>(d, "p_f", c.combat.p_f);
    c.combat.p_t = get_or<double>(d, "p_t", c.combat.p_t);
    c.combat.t_d = get_or<double>(d, "t_d", c.combat.t_d);
    c.combat.t_c = get_or<double>(d, "t_c", c.combat.t_c);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    detail::reject_unknown_keys(s, {"parameter", "values"}, "sweep");
    c.sweep = Sweep{get_or<std::string>(s, "parameter", ""), get_or<std::vector<double>>(s, "values", {})};
  }
  c.k_max = get_or<std::size_t>(j, "k_max", c.k_max);
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", c.master_seed);
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

/// Desk scale: n / 5 and ensemble * 3 / 5 (1000 -> 200, 50 -> 30). Edge
/// probabilities that set a node's expected degree across the whole graph
/// (ER edge_exist_prob, partition p_out) are multiplied by 5 so mean degrees
/// are preserved; community-level parameters (s, v, p_in) are unchanged, and
/// LFR's min_community shrinks with n.
inline ExperimentConfig apply_scale(ExperimentConfig c, Scale scale) {
  if (scale == Scale::Paper) return c;
  constexpr double kFactor = 5.0;
  auto shrink = [](std::size_t n) { return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n / kFactor))); };
  auto densify = [](double p) { return std::min(1.0, p * kFactor); };
  c.ensemble_size = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.ensemble_size * 3.0 / 5.0)));
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        p.n = shrink(p.n);
        if constexpr (std::is_same_v<T, ErParams>) {
          p.edge_exist_prob = densify(p.edge_exist_prob);
        } else if constexpr (std::is_same_v<T, GaussianPartitionParams>) {
          p.p_out = densify(p.p_out);
        } else {
          p.min_community = shrink(p.min_community);
        }
      },
      c.generator);
  if (c.sweep && (c.sweep->parameter == "edge_exist_prob" || c.sweep->parameter == "p_out")) {
    for (double& v : c.sweep->values) v = densify(v);
  }
  const std::size_t n = std::visit([](const auto& p) { return p.n; }, c.generator);
  c.k_max = std::min(c.k_max, n);
  c.info_starter = std::min(c.info_starter, n);
  c.true_info_starter = std::min(c.true_info_starter, n);
  c.false_info_starter = std::min(c.false_info_starter, n);
  return c;
}

inline Scale parse_scale(std::string_view s) {
  if (s == "paper") return Scale::Paper;
  if (s == "desk") return Scale::Desk;
  throw InputError("scale must be desk or paper");
}

/// Returns a copy of `c` with sweep parameter `name` set to `value`.
inline ExperimentConfig with_parameter(ExperimentConfig c, const std::string& name, double value) {
  if (name == "transmission_prob") c.diffusion.transmission_prob = value;
  else if (name == "threshold") c.diffusion.threshold = value;
  else if (name == "p_f") c.combat.p_f = value;
  else if (name == "p_t") c.combat.p_t = value;
  else if (name == "t_d") c.combat.t_d = value;
  else if (name == "t_c") c.combat.t_c = value;
  else {
    bool applied = false;
    std::visit(
        [&](auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ErParams>) {
            if (name == "edge_exist_prob") { p.edge_exist_prob = value; applied = true; }
          } else if constexpr (std::is_same_v<T, GaussianPartitionParams>) {
            if (name == "v") { p.v = value; applied = true; }
            else if (name == "s") { p.s = value; applied = true; }
            else if (name == "p_in") { p.p_in = value; applied = true; }
            else if (name == "p_out") { p.p_out = value; applied = true; }
          } else {
            if (name == "mu") { p.mu = value; applied = true; }
          }
        },
        c.generator);
    if (!applied) throw InputError("parameter '" + name + "' does not apply to this generator");
  }
  c.sweep.reset();
  return c;
}

/// FNV-1a over the config's canonical JSON text.
inline std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

// ---------------------------------------------------------------------------
// Running

inline CommunityGraph generate(const GeneratorParams& gp, std::uint64_t seed) {
  return std::visit(
      [&](const auto& p) -> CommunityGraph {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ErParams>) {
          return CommunityGraph{gen_er(p, seed), std::vector<std::uint32_t>(p.n, 0)};
        } else if constexpr (std::is_same_v<T, GaussianPartitionParams>) {
          return gen_gaussian_partition(p, seed);
        } else {
          return gen_lfr(p, seed);
        }
      },
      gp);
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Exceptions are
/// collected per index; the lowest-index one is rethrown after all workers join.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace detail {

struct MetricSpec {
  const char* name;
  bool higher_is_better;
  double (*get)(const RunRecord&);
};

inline std::vector<MetricSpec> metrics_for(ExperimentMode mode) {
  if (mode == ExperimentMode::Single) {
    return {{"iterations", false, [](const RunRecord& r) { return static_cast<double>(r.iterations); }},
            {"sum_p_i", true, [](const RunRecord& r) { return r.sum_p_i; }}};
  }
  return {{"sum_p_it", true, [](const RunRecord& r) { return r.sum_p_it; }},
          {"infected", false, [](const RunRecord& r) { return static_cast<double>(r.infected); }},
          {"susceptible", false, [](const RunRecord& r) { return static_cast<double>(r.susceptible); }},
          {"protected", true, [](const RunRecord& r) { return static_cast<double>(r.protected_count); }}};
}

/// Runs every strategy of `cfg` on one graph instance.
inline std::vector<RunRecord> run_on_graph(const ExperimentConfig& cfg, const Graph& g, std::size_t graph_index,
                                           std::optional<double> sweep_value,
                                           std::map<CentralityKind, std::vector<NodeId>>& ranking_cache) {
  const std::size_t k = cfg.mode == ExperimentMode::Single ? cfg.info_starter : cfg.true_info_starter;
  std::vector<NodeId> ic_f;
  if (cfg.mode == ExperimentMode::Intervention) {
    ic_f = random_nodes(g.node_count(), cfg.false_info_starter,
                        derive_seed(cfg.master_seed, {kFalseCreatorStream, graph_index}));
  }
  std::vector<RunRecord> out;
  for (CentralityKind kind : cfg.strategies) {
    auto it = ranking_cache.find(kind);
    if (it == ranking_cache.end()) {
      const auto seed = derive_seed(cfg.master_seed, {kRandomStrategyStream, graph_index});
      it = ranking_cache.emplace(kind, select_seeds(g, kind, k, seed)).first;
    }
    const auto& seeds = it->second;
    RunRecord r;
    r.strategy = kind;
    r.graph_index = graph_index;
    r.sweep_value = sweep_value;
    if (cfg.mode == ExperimentMode::Single) {
      const auto state = run_single_diffusion(g, seeds, cfg.diffusion);
      const auto m = diffusion_metrics(state);
      r.iterations = m.iterations;
      r.sum_p_i = m.sum_p_i;
      r.infected = m.infected;
      r.susceptible = g.node_count() - m.infected;
    } else {
      const auto m = intervention_metrics(run_intervention(g, ic_f, seeds, cfg.combat));
      r.iterations = m.steps;
      r.sum_p_i = m.sum_p_if;
      r.sum_p_it = m.sum_p_it;
      r.infected = m.infected;
      r.susceptible = m.susceptible;
      r.protected_count = m.protected_count;
    }
    out.push_back(r);
  }
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Paired one-tailed comparisons of every non-random strategy against the
/// random baseline, per sweep point and metric. All-zero differences are
/// recorded as degenerate with p = 1.
inline std::vector<StrategyComparison> compare_against_random(const ExperimentConfig& cfg,
                                                              const std::vector<RunRecord>& records) {
  std::vector<StrategyComparison> out;
  std::vector<std::optional<double>> points;
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) points.emplace_back(v);
  } else {
    points.emplace_back(std::nullopt);
  }
  for (const auto& point : points) {
    std::map<std::size_t, const RunRecord*> random_by_graph;
    for (const auto& r : records) {
      if (r.strategy == CentralityKind::Random && r.sweep_value == point) random_by_graph[r.graph_index] = &r;
    }
    for (CentralityKind kind : cfg.strategies) {
      if (kind == CentralityKind::Random) continue;
      for (const auto& metric : detail::metrics_for(cfg.mode)) {
        PairedSample sample;
        for (const auto& r : records) {
          if (r.strategy != kind || r.sweep_value != point) continue;
          sample.pairs.emplace_back(metric.get(r), metric.get(*random_by_graph.at(r.graph_index)));
        }
        StrategyComparison cmp;
        cmp.strategy = kind;
        cmp.sweep_value = point;
        cmp.metric = metric.name;
        try {
          cmp.test = compare_strategies(sample, metric.higher_is_better);
        } catch (const DegenerateSampleError&) {
          cmp.degenerate = true;
          cmp.test.p_one_tailed = 1.0;
          cmp.test.n_effective = 0;
          cmp.test.variant = "degenerate: every paired difference is zero";
        }
        out.push_back(std::move(cmp));
      }
    }
  }
  return out;
}

/// Runs an ensemble study (single or intervention mode). Graph i uses seed
/// graph_seed(master, i) at every sweep point, every strategy runs on the
/// same graph instance, and in intervention mode the random false creators
/// are drawn once per graph and shared by all strategies. The random
/// strategy is added as the baseline if the config omits it.
inline ExperimentResult run_experiment(ExperimentConfig config, std::size_t threads = 1) {
  validate(config);
  if (config.mode == ExperimentMode::MinTrueSeeds) {
    throw InputError("run_experiment: use run_min_seed_search for min_true_seeds configs");
  }
  if (std::find(config.strategies.begin(), config.strategies.end(), CentralityKind::Random) == config.strategies.end()) {
    config.strategies.push_back(CentralityKind::Random);
  }

  std::vector<std::optional<double>> points;
  if (config.sweep) {
    for (double v : config.sweep->values) points.emplace_back(v);
  } else {
    points.emplace_back(std::nullopt);
  }
  if (config.sweep) {
    for (double v : config.sweep->values) {
      const auto cfg = with_parameter(config, config.sweep->parameter, v);
      std::visit([](const auto& p) { validate(p); }, cfg.generator);
      validate(cfg.diffusion);
      validate(cfg.combat);
    }
  }
  const bool regenerate_per_point = config.sweep && is_generator_parameter(config.sweep->parameter);

  // per_graph[i][point] -> records for every strategy.
  std::vector<std::vector<std::vector<RunRecord>>> per_graph(config.ensemble_size,
                                                             std::vector<std::vector<RunRecord>>(points.size()));
  parallel_for(config.ensemble_size, threads, [&](std::size_t i) {
    const auto seed = graph_seed(config.master_seed, i);
    std::optional<CommunityGraph> shared;
    std::map<CentralityKind, std::vector<NodeId>> shared_rankings;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const ExperimentConfig cfg = points[p] ? with_parameter(config, config.sweep->parameter, *points[p]) : config;
      try {
        if (regenerate_per_point) {
          std::map<CentralityKind, std::vector<NodeId>> rankings;
          const auto cg = generate(cfg.generator, seed);
          per_graph[i][p] = detail::run_on_graph(cfg, cg.graph, i, points[p], rankings);
        } else {
          if (!shared) shared = generate(cfg.generator, seed);
          per_graph[i][p] = detail::run_on_graph(cfg, shared->graph, i, points[p], shared_rankings);
        }
      } catch (const Error& e) {
        throw GenerationError("graph " + std::to_string(i) + ": " + e.code() + ": " + e.what());
      }
    }
  });

  ExperimentResult result;
  result.config = config;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      for (std::size_t i = 0; i < config.ensemble_size; ++i) result.records.push_back(per_graph[i][p][s]);
    }
  }
  result.comparisons = compare_against_random(config, result.records);
  result.provenance.config_hash = config_hash(config);
  result.provenance.master_seed = config.master_seed;
  for (std::size_t i = 0; i < config.ensemble_size; ++i) result.provenance.graph_seeds.push_back(graph_seed(config.master_seed, i));
  result.provenance.timestamp = detail::utc_timestamp();
  return result;
}

/// Density sweep over ER edge_exist_prob values.
inline ExperimentResult run_density_sweep(ExperimentConfig base, const std::vector<double>& density_grid,
                                          std::size_t threads = 1) {
  if (!std::holds_alternative<ErParams>(base.generator)) throw InputError("density sweep needs an er generator");
  if (density_grid.empty()) throw InputError("density grid is empty");
  base.sweep = Sweep{"edge_exist_prob", density_grid};
  return run_experiment(std::move(base), threads);
}

/// Community-size variance sweep over the Gaussian partition shape v.
inline ExperimentResult run_variance_sweep(ExperimentConfig base, const std::vector<double>& v_grid,
                                           std::size_t threads = 1) {
  if (!std::holds_alternative<GaussianPartitionParams>(base.generator)) {
    throw InputError("variance sweep needs a gaussian_partition generator");
  }
  if (v_grid.empty()) throw InputError("v grid is empty");
  base.sweep = Sweep{"v", v_grid};
  return run_experiment(std::move(base), threads);
}

struct AdvantagePoint {
  CentralityKind strategy;
  std::optional<double> sweep_value;
  std::vector<double> per_graph;  // centrality metric - random metric
  double mean = 0.0;
};

/// Per-graph (strategy - random) differences of `metric` at each sweep point.
inline std::vector<AdvantagePoint> advantage_curves(const ExperimentResult& result, const std::string& metric) {
  const auto specs = detail::metrics_for(result.config.mode);
  auto spec = std::find_if(specs.begin(), specs.end(), [&](const auto& m) { return metric == m.name; });
  if (spec == specs.end()) throw InputError("unknown metric '" + metric + "'");
  std::map<std::pair<std::optional<double>, std::size_t>, double> random_value;
  for (const auto& r : result.records) {
    if (r.strategy == CentralityKind::Random) random_value[{r.sweep_value, r.graph_index}] = spec->get(r);
  }
  std::vector<AdvantagePoint> out;
  for (const auto& r : result.records) {
    if (r.strategy == CentralityKind::Random) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const AdvantagePoint& a) {
      return a.strategy == r.strategy && a.sweep_value == r.sweep_value;
    });
    if (it == out.end()) {
      out.push_back({r.strategy, r.sweep_value, {}, 0.0});
      it = out.end() - 1;
    }
    it->per_graph.push_back(spec->get(r) - random_value.at({r.sweep_value, r.graph_index}));
  }
  for (auto& a : out) a.mean = summarize(a.per_graph).mean;
  return out;
}

/// Mean of `metric` per (strategy, sweep point), in record order.
inline std::vector<std::tuple<CentralityKind, std::optional<double>, double>> ensemble_means(
    const ExperimentResult& result, const std::string& metric) {
  const auto specs = detail::metrics_for(result.config.mode);
  auto spec = std::find_if(specs.begin(), specs.end(), [&](const auto& m) { return metric == m.name; });
  if (spec == specs.end()) throw InputError("unknown metric '" + metric + "'");
  std::vector<std::tuple<CentralityKind, std::optional<double>, double>> out;
  std::vector<std::size_t> counts;
  for (const auto& r : result.records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& t) {
      return std::get<0>(t) == r.strategy && std::get<1>(t) == r.sweep_value;
    });
    if (it == out.end()) {
      out.emplace_back(r.strategy, r.sweep_value, 0.0);
      counts.push_back(0);
      it = out.end() - 1;
    }
    std::get<2>(*it) += spec->get(r);
    ++counts[static_cast<std::size_t>(it - out.begin())];
  }
  for (std::size_t i = 0; i < out.size(); ++i) std::get<2>(out[i]) /= static_cast<double>(counts[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Minimum true-seed search

struct MinSeedResult {
  ExperimentConfig config;
  std::vector<std::pair<CentralityKind, MinSeedSearch>> per_strategy;
  Provenance provenance;
};

/// Builds the ensemble (graphs + random false creators of size
/// false_info_starter) once and searches k = 1..k_max for every strategy.
inline MinSeedResult run_min_seed_search(ExperimentConfig config, std::size_t threads = 1) {
  config.mode = ExperimentMode::MinTrueSeeds;
  validate(config);
  std::vector<CommunityGraph> graphs(config.ensemble_size);
  parallel_for(config.ensemble_size, threads, [&](std::size_t i) {
    try {
      graphs[i] = generate(config.generator, graph_seed(config.master_seed, i));
    } catch (const Error& e) {
      throw GenerationError("graph " + std::to_string(i) + ": " + e.what());
    }
  });
  std::vector<InterventionScenario> ensemble;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    ensemble.push_back({&graphs[i].graph,
                        random_nodes(graphs[i].graph.node_count(), config.false_info_starter,
                                     derive_seed(config.master_seed, {kFalseCreatorStream, i})),
                        derive_seed(config.master_seed, {kRandomStrategyStream, i})});
  }
  MinSeedResult out;
  out.config = config;
  out.per_strategy.resize(config.strategies.size());
  parallel_for(config.strategies.size(), threads, [&](std::size_t s) {
    out.per_strategy[s] = {config.strategies[s], minimum_true_seeds(ensemble, config.strategies[s], config.combat, config.k_max)};
  });
  out.provenance.config_hash = config_hash(config);
  out.provenance.master_seed = config.master_seed;
  for (std::size_t i = 0; i < config.ensemble_size; ++i) out.provenance.graph_seeds.push_back(graph_seed(config.master_seed, i));
  out.provenance.timestamp = detail::utc_timestamp();
  return out;
}

// ---------------------------------------------------------------------------
// Export / import

inline constexpr std::string_view kRecordCsvHeader =
    "strategy,graph_index,sweep_value,iterations,sum_p_i,sum_p_it,infected,susceptible,protected";

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.strategy) << ',' << r.graph_index << ','
        << (r.sweep_value ? detail::format_double(*r.sweep_value) : std::string()) << ',' << r.iterations << ','
        << detail::format_double(r.sum_p_i) << ',' << detail::format_double(r.sum_p_it) << ',' << r.infected << ','
        << r.susceptible << ',' << r.protected_count << '\n';
  }
}

inline std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordCsvHeader) throw InputError("records csv: unexpected header");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 9) throw InputError("records csv: expected 9 columns in '" + line + "'");
    try {
      RunRecord r;
      r.strategy = parse_centrality_kind(cells[0]);
      r.graph_index = std::stoull(cells[1]);
      if (!cells[2].empty()) r.sweep_value = std::stod(cells[2]);
      r.iterations = std::stoull(cells[3]);
      r.sum_p_i = std::stod(cells[4]);
      r.sum_p_it = std::stod(cells[5]);
      r.infected = std::stoull(cells[6]);
      r.susceptible = std::stoull(cells[7]);
      r.protected_count = std::stoull(cells[8]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw InputError("records csv: malformed row '" + line + "'");
    }
  }
  return out;
}

inline nlohmann::json to_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["config"] = to_json(r.config);
  j["records"] = nlohmann::json::array();
  for (const auto& rec : r.records) {
    j["records"].push_back({{"strategy", to_string(rec.strategy)},
                            {"graph_index", rec.graph_index},
                            {"sweep_value", rec.sweep_value ? nlohmann::json(*rec.sweep_value) : nlohmann::json()},
                            {"iterations", rec.iterations},
                            {"sum_p_i", rec.sum_p_i},
                            {"sum_p_it", rec.sum_p_it},
                            {"infected", rec.infected},
                            {"susceptible", rec.susceptible},
                            {"protected", rec.protected_count}});
  }
  j["comparisons"] = nlohmann::json::array();
  for (const auto& c : r.comparisons) {
    j["comparisons"].push_back({{"strategy", to_string(c.strategy)},
                                {"sweep_value", c.sweep_value ? nlohmann::json(*c.sweep_value) : nlohmann::json()},
                                {"metric", c.metric},
                                {"degenerate", c.degenerate},
                                {"statistic", c.test.statistic},
                                {"p_one_tailed", c.test.p_one_tailed},
                                {"n_effective", c.test.n_effective},
                                {"method", to_string(c.test.method)},
                                {"variant", c.test.variant}});
  }
  j["provenance"] = {{"config_hash", r.provenance.config_hash},
                     {"master_seed", r.provenance.master_seed},
                     {"graph_seeds", r.provenance.graph_seeds},
                     {"timestamp", r.provenance.timestamp}};
  return j;
}

inline ExperimentResult result_from_json(const nlohmann::json& j) {
  ExperimentResult r;
  try {
    r.config = config_from_json(j.at("config"));
    for (const auto& rec : j.at("records")) {
      RunRecord x;
      x.strategy = parse_centrality_kind(rec.at("strategy").get<std::string>());
      x.graph_index = rec.at("graph_index").get<std::size_t>();
      if (!rec.at("sweep_value").is_null()) x.sweep_value = rec.at("sweep_value").get<double>();
      x.iterations = rec.at("iterations").get<std::size_t>();
      x.sum_p_i = rec.at("sum_p_i").get<double>();
      x.sum_p_it = rec.at("sum_p_it").get<double>();
      x.infected = rec.at("infected").get<std::size_t>();
      x.susceptible = rec.at("susceptible").get<std::size_t>();
      x.protected_count = rec.at("protected").get<std::size_t>();
      r.records.push_back(x);
    }
    for (const auto& c : j.at("comparisons")) {
      StrategyComparison x;
      x.strategy = parse_centrality_kind(c.at("strategy").get<std::string>());
      if (!c.at("sweep_value").is_null()) x.sweep_value = c.at("sweep_value").get<double>();
      x.metric = c.at("metric").get<std::string>();
      x.degenerate = c.at("degenerate").get<bool>();
      x.test.statistic = c.at("statistic").get<double>();
      x.test.p_one_tailed = c.at("p_one_tailed").get<double>();
      x.test.n_effective = c.at("n_effective").get<std::size_t>();
      x.test.method = c.at("method").get<std::string>() == "exact" ? WilcoxonMethod::Exact
                                                                   : WilcoxonMethod::NormalApproximation;
      x.test.variant = c.at("variant").get<std::string>();
      r.comparisons.push_back(x);
    }
    const auto& p = j.at("provenance");
    r.provenance.config_hash = p.at("config_hash").get<std::string>();
    r.provenance.master_seed = p.at("master_seed").get<std::uint64_t>();
    r.provenance.graph_seeds = p.at("graph_seeds").get<std::vector<std::uint64_t>>();
    r.provenance.timestamp = p.at("timestamp").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("result json: ") + e.what());
  }
  return r;
}

enum class ExportFormat { Csv, Json };

inline void export_results(const ExperimentResult& result, const std::string& path, ExportFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == ExportFormat::Csv) write_records_csv(out, result.records);
  else out << std::setw(2) << to_json(result) << '\n';
  if (!out) throw IoError("write failed on '" + path + "'");
}

inline nlohmann::json to_json(const MinSeedResult& r) {
  nlohmann::json j;
  j["config"] = to_json(r.config);
  j["strategies"] = nlohmann::json::array();
  for (const auto& [kind, search] : r.per_strategy) {
    nlohmann::json curve = nlohmann::json::array();
    for (std::size_t k = 0; k < search.curve.size(); ++k) {
      curve.push_back({{"k", k + 1}, {"mean_protected", search.curve[k].first}, {"mean_infected", search.curve[k].second}});
    }
    j["strategies"].push_back({{"strategy", to_string(kind)},
                               {"min_true_seeds", search.k ? nlohmann::json(*search.k) : nlohmann::json()},
                               {"curve", curve}});
  }
  j["provenance"] = {{"config_hash", r.provenance.config_hash},
                     {"master_seed", r.provenance.master_seed},
                     {"graph_seeds", r.provenance.graph_seeds},
                     {"timestamp", r.provenance.timestamp}};
  return j;
}

// ---------------------------------------------------------------------------
// Presets mirroring the published experiment batteries (paper scale).

inline std::vector<std::string> preset_names() {
  return {"dense_er",          "sparse_er",         "gaussian_similar",   "gaussian_varying", "lfr",
          "p_sweep_dense_er",  "density_sweep",     "variance_sweep",     "intervention_er",  "intervention_gaussian",
          "intervention_lfr",  "min_seeds_er",      "min_seeds_gaussian"};
}

inline ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.master_seed = 20230101;
  const GaussianPartitionParams similar{1000, 40, 40, 0.1, 0.001};
  const LfrParams lfr{1000, 3.0, 1.5, 0.1, 5.0, 50};
  auto intervention = [&](GeneratorParams g, double t_d) {
    c.generator = g;
    c.mode = ExperimentMode::Intervention;
    c.combat = {0.5, 0.4, t_d, 0.1};
    c.false_info_starter = 3;
    c.true_info_starter = 10;
  };
  if (name == "dense_er") {
    c.generator = ErParams{1000, 0.04};
  } else if (name == "sparse_er") {
    c.generator = ErParams{1000, 0.0005};
  } else if (name == "gaussian_similar") {
    c.generator = similar;
  } else if (name == "gaussian_varying") {
    c.generator = GaussianPartitionParams{1000, 40, 1, 0.1, 0.001};
  } else if (name == "lfr") {
    c.generator = lfr;
  } else if (name == "p_sweep_dense_er") {
    c.generator = ErParams{1000, 0.04};
    c.sweep = Sweep{"transmission_prob", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}};
  } else if (name == "density_sweep") {
    c.generator = ErParams{1000, 0.04};
    c.sweep = Sweep{"edge_exist_prob", {0.001, 0.002, 0.005, 0.01, 0.02, 0.04, 0.1}};
  } else if (name == "variance_sweep") {
    c.generator = similar;
    c.sweep = Sweep{"v", {40, 20, 10, 5, 2, 1}};
  } else if (name == "intervention_er") {
    intervention(ErParams{1000, 0.03}, 0.4);
  } else if (name == "intervention_gaussian") {
    intervention(similar, 0.4);
  } else if (name == "intervention_lfr") {
    intervention(lfr, 0.5);
  } else if (name == "min_seeds_er") {
    intervention(ErParams{1000, 0.03}, 0.4);
    c.mode = ExperimentMode::MinTrueSeeds;
    c.k_max = 1000;
  } else if (name == "min_seeds_gaussian") {
    intervention(similar, 0.4);
    c.mode = ExperimentMode::MinTrueSeeds;
    c.k_max = 1000;
  } else {
    throw InputError("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace infodiff

#endif  // INFODIFF_HARNESS_HPP
