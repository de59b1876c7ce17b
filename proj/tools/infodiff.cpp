// infodiff: command-line front end over the header library.
//
// Exit codes: 0 success, 1 input error (bad flags, files, values),
// 2 runtime error (numeric, generation, contract, degenerate sample).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "infodiff/infodiff.hpp"

using namespace infodiff;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Writes to `path`, or stdout when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw IoError("write failed on '" + path + "'");
}

std::vector<NodeId> choose_seeds(const Graph& g, const std::vector<NodeId>& explicit_ids, const std::string& strategy,
                                 std::size_t k, const std::optional<std::uint64_t>& seed, const char* what) {
  if (!explicit_ids.empty()) {
    if (!strategy.empty()) throw InputError(std::string("give either explicit ") + what + " ids or --strategy, not both");
    for (NodeId v : explicit_ids)
      if (v >= g.node_count()) throw InputError(std::string(what) + " id " + std::to_string(v) + " is out of range");
    return explicit_ids;
  }
  if (strategy.empty()) throw InputError(std::string("no ") + what + " given (use ids or --strategy with --k)");
  const auto kind = parse_centrality_kind(strategy);
  if (kind == CentralityKind::Random && !seed) throw InputError("--seed is required for the random strategy");
  if (k == 0) throw InputError("--k must be at least 1");
  return select_seeds(g, kind, k, seed.value_or(0));
}

// Paired CSV with a header: two columns (x,y) or three (label,x,y).
PairedSample read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line == "news_id,true,false") {
    in.seekg(0);
    return engagement_pairs(read_engagement_csv(in));
  }
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns != 2 && columns != 3) throw InputError(path + ": expected 2 or 3 columns");
  PairedSample s;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (static_cast<long>(cells.size()) != columns) throw InputError(path + ": bad column count on line " + std::to_string(line_no));
    try {
      std::size_t used = 0;
      const double x = std::stod(cells[columns - 2], &used);
      if (used != cells[columns - 2].size()) throw std::invalid_argument("x");
      const double y = std::stod(cells[columns - 1], &used);
      if (used != cells[columns - 1].size()) throw std::invalid_argument("y");
      s.pairs.emplace_back(x, y);
      s.labels.push_back(columns == 3 ? cells[0] : std::to_string(line_no - 1));
    } catch (const std::logic_error&) {
      throw InputError(path + ": malformed number on line " + std::to_string(line_no));
    }
  }
  return s;
}

void print_error(const std::string& code, const std::string& message) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  std::cerr << "error: " << code << ": " << flat << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered information diffusion: generators, centrality seeding, single and competing diffusion, "
               "paired Wilcoxon statistics and experiment batteries."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "infodiff 1.0");

  // generate ------------------------------------------------------------
  auto* generate_cmd = app.add_subcommand("generate", "Generate a random graph as an edge list");
  generate_cmd->require_subcommand(1);
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out, gen_communities;
  auto add_common_gen = [&](CLI::App* sub) {
    sub->add_option("--seed", gen_seed, "RNG seed (required)")->required();
    sub->add_option("--out", gen_out, "Edge-list output path (default stdout)");
  };

  ErParams er{1000, 0.04};
  auto* er_cmd = generate_cmd->add_subcommand("er", "Erdos-Renyi graph");
  er_cmd->add_option("--n", er.n, "Node count (n)")->required();
  er_cmd->add_option("--p,--edge-exist-prob", er.edge_exist_prob, "Edge probability (edge_exist_prob)")->required();
  add_common_gen(er_cmd);

  GaussianPartitionParams gp{1000, 40, 40, 0.1, 0.001};
  auto* gp_cmd = generate_cmd->add_subcommand("gaussian", "Gaussian random partition graph");
  gp_cmd->add_option("--n", gp.n, "Node count (n)")->required();
  gp_cmd->add_option("--s", gp.s, "Mean community size (s)")->capture_default_str();
  gp_cmd->add_option("--v", gp.v, "Shape; size variance is s/v (v)")->capture_default_str();
  gp_cmd->add_option("--p-in", gp.p_in, "Intra-community edge probability (p_in)")->capture_default_str();
  gp_cmd->add_option("--p-out", gp.p_out, "Inter-community edge probability (p_out)")->capture_default_str();
  gp_cmd->add_option("--communities", gen_communities, "Write 'node community' lines to this path");
  add_common_gen(gp_cmd);

  LfrParams lfr{1000, 3.0, 1.5, 0.1, 5.0, 50};
  auto* lfr_cmd = generate_cmd->add_subcommand("lfr", "LFR benchmark graph");
  lfr_cmd->add_option("--n", lfr.n, "Node count (n)")->required();
  lfr_cmd->add_option("--tau1", lfr.tau1, "Degree power-law exponent (tau1)")->capture_default_str();
  lfr_cmd->add_option("--tau2", lfr.tau2, "Community-size power-law exponent (tau2)")->capture_default_str();
  lfr_cmd->add_option("--mu", lfr.mu, "Mixing parameter (mu)")->capture_default_str();
  lfr_cmd->add_option("--average-degree", lfr.average_degree, "Target mean degree (average_degree)")->capture_default_str();
  lfr_cmd->add_option("--min-community", lfr.min_community, "Smallest community size (min_community)")->capture_default_str();
  lfr_cmd->add_option("--communities", gen_communities, "Write 'node community' lines to this path");
  add_common_gen(lfr_cmd);

  // centrality ----------------------------------------------------------
  auto* centrality_cmd = app.add_subcommand("centrality", "Score every node by a centrality measure");
  std::string c_graph, c_measure = "all", c_out;
  centrality_cmd->add_option("--graph", c_graph, "Edge-list file")->required();
  centrality_cmd->add_option("--measure", c_measure, "degree|eigenvector|closeness|betweenness|pagerank|all")
      ->capture_default_str();
  centrality_cmd->add_option("--out", c_out, "CSV output path (default stdout)");

  // diffuse -------------------------------------------------------------
  auto* diffuse_cmd = app.add_subcommand("diffuse", "Run single-message layered diffusion");
  std::string d_graph, d_strategy, d_out, d_metrics;
  std::vector<NodeId> d_ic;
  std::size_t d_k = 0;
  std::optional<std::uint64_t> d_seed;
  DiffusionParams dp{0.5, 0.5};
  diffuse_cmd->add_option("--graph", d_graph, "Edge-list file")->required();
  diffuse_cmd->add_option("--transmission-prob", dp.transmission_prob, "Transmission probability (P)")->required();
  diffuse_cmd->add_option("--threshold", dp.threshold, "Infection threshold on p_i (T)")->required();
  diffuse_cmd->add_option("--ic", d_ic, "Information creators (IC), comma-separated node ids")->delimiter(',');
  diffuse_cmd->add_option("--strategy", d_strategy, "Pick IC by degree|eigenvector|closeness|betweenness|pagerank|random");
  diffuse_cmd->add_option("--k", d_k, "Number of information creators when using --strategy (info_starter)");
  diffuse_cmd->add_option("--seed", d_seed, "RNG seed (required for --strategy random)");
  diffuse_cmd->add_option("--out", d_out, "Per-node CSV output path (default stdout)");
  diffuse_cmd->add_option("--metrics", d_metrics, "Write metrics JSON to this path");

  // intervene -----------------------------------------------------------
  auto* intervene_cmd = app.add_subcommand("intervene", "Run competing false/true diffusion");
  std::string i_graph, i_strategy, i_out, i_metrics;
  std::vector<NodeId> i_ic_f, i_ic_t;
  std::size_t i_k = 0;
  std::optional<std::uint64_t> i_seed;
  CombatParams cp{0.5, 0.4, 0.5, 0.1};
  intervene_cmd->add_option("--graph", i_graph, "Edge-list file")->required();
  intervene_cmd->add_option("--ic-f", i_ic_f, "False information creators (IC_F), comma-separated")->delimiter(',')->required();
  intervene_cmd->add_option("--ic-t", i_ic_t, "True information creators (IC_T), comma-separated")->delimiter(',');
  intervene_cmd->add_option("--strategy", i_strategy, "Pick IC_T by a centrality strategy instead of --ic-t");
  intervene_cmd->add_option("--k", i_k, "Number of true creators with --strategy (true_info_starter)");
  intervene_cmd->add_option("--seed", i_seed, "RNG seed (required for --strategy random)");
  intervene_cmd->add_option("--pf,--false-transmission-prob", cp.p_f, "False transmission probability (P_F)")->required();
  intervene_cmd->add_option("--pt,--true-transmission-prob", cp.p_t, "True transmission probability (P_T)")->required();
  intervene_cmd->add_option("--td,--decisive-threshold", cp.t_d, "Decisive threshold on p_if (T_D)")->required();
  intervene_cmd->add_option("--tc,--comparative-threshold", cp.t_c, "Comparative threshold on p_if - p_it (T_C)")->required();
  intervene_cmd->add_option("--out", i_out, "Per-node CSV output path (default stdout)");
  intervene_cmd->add_option("--metrics", i_metrics, "Write metrics JSON to this path");

  // stats ---------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "Paired statistics");
  stats_cmd->require_subcommand(1);
  std::string s_input, s_alt = "x_less";
  auto* wilcoxon_cmd = stats_cmd->add_subcommand("wilcoxon", "One-tailed Wilcoxon signed-rank test on x - y");
  wilcoxon_cmd->add_option("--input", s_input, "CSV with header: x,y or label,x,y (or news_id,true,false)")->required();
  wilcoxon_cmd->add_option("--alt", s_alt, "Alternative: x_less or x_greater")->capture_default_str();
  auto* summarize_cmd = stats_cmd->add_subcommand("summarize", "Mean and median of both columns");
  summarize_cmd->add_option("--input", s_input, "CSV with header: x,y or label,x,y (or news_id,true,false)")->required();

  // experiment ----------------------------------------------------------
  auto* experiment_cmd = app.add_subcommand("experiment", "Ensemble experiment batteries");
  experiment_cmd->require_subcommand(1);
  std::string e_config, e_out, e_scale = "paper", e_preset;
  std::size_t e_threads = std::max(1u, std::thread::hardware_concurrency());
  auto* run_cmd = experiment_cmd->add_subcommand("run", "Run a battery from a JSON config");
  run_cmd->add_option("--config", e_config, "Experiment config JSON")->required();
  run_cmd->add_option("--out", e_out, "Output directory for records.csv and result JSON")->required();
  run_cmd->add_option("--scale", e_scale, "desk (n/5, ensemble x3/5, densities x5) or paper")->capture_default_str();
  run_cmd->add_option("--threads", e_threads, "Worker threads for the ensemble");
  auto* preset_cmd = experiment_cmd->add_subcommand("preset", "Print a named preset config as JSON");
  preset_cmd->add_option("name", e_preset, "Preset name (omit to list)");
  preset_cmd->add_option("--scale", e_scale, "desk or paper")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("input", e.what());
    std::cerr << "run with --help for usage\n";
    return 1;
  }

  try {
    if (*generate_cmd) {
      CommunityGraph cg;
      if (*er_cmd) cg = {gen_er(er, *gen_seed), std::vector<std::uint32_t>(er.n, 0)};
      else if (*gp_cmd) cg = gen_gaussian_partition(gp, *gen_seed);
      else cg = gen_lfr(lfr, *gen_seed);
      emit(gen_out, [&](std::ostream& out) { write_edge_list(out, cg.graph); });
      if (!gen_communities.empty()) {
        emit(gen_communities, [&](std::ostream& out) { write_communities(out, cg.community_of); });
      }
    } else if (*centrality_cmd) {
      const Graph g = load_edge_list(c_graph);
      std::vector<CentralityKind> kinds;
      if (c_measure == "all") kinds.assign(kCentralityMeasures.begin(), kCentralityMeasures.end());
      else {
        const auto kind = parse_centrality_kind(c_measure);
        if (kind == CentralityKind::Random) throw InputError("random is a strategy, not a measure");
        kinds.push_back(kind);
      }
      std::vector<CentralityScores> scores;
      for (auto kind : kinds) scores.push_back(compute_centrality(g, kind));
      emit(c_out, [&](std::ostream& out) {
        out << "node";
        for (auto kind : kinds) out << ',' << to_string(kind);
        out << '\n';
        for (NodeId v = 0; v < g.node_count(); ++v) {
          out << v;
          for (const auto& s : scores) out << ',' << fmt(s.score[v]);
          out << '\n';
        }
      });
    } else if (*diffuse_cmd) {
      validate(dp);
      const Graph g = load_edge_list(d_graph);
      const auto ic = choose_seeds(g, d_ic, d_strategy, d_k, d_seed, "information creator");
      const auto state = run_single_diffusion(g, ic, dp);
      emit(d_out, [&](std::ostream& out) {
        out << "node,layer,p_i,label\n";
        for (NodeId v = 0; v < g.node_count(); ++v) {
          const auto layer = state.layers.layer(v);
          out << v << ',' << (layer ? std::to_string(*layer) : std::string()) << ',' << fmt(state.p_i[v]) << ','
              << to_string(state.labels[v]) << '\n';
        }
      });
      if (!d_metrics.empty()) {
        const auto m = diffusion_metrics(state);
        json j = {{"iterations", m.iterations}, {"sum_p_i", m.sum_p_i}, {"infected_count", m.infected},
                  {"information_creators", ic}};
        emit(d_metrics, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
      }
    } else if (*intervene_cmd) {
      validate(cp);
      const Graph g = load_edge_list(i_graph);
      for (NodeId v : i_ic_f)
        if (v >= g.node_count()) throw InputError("false creator id " + std::to_string(v) + " is out of range");
      const auto ic_t = choose_seeds(g, i_ic_t, i_strategy, i_k, i_seed, "true creator");
      const auto state = run_intervention(g, i_ic_f, ic_t, cp);
      emit(i_out, [&](std::ostream& out) {
        out << "node,p_if,p_it,blocked,label\n";
        for (NodeId v = 0; v < g.node_count(); ++v) {
          out << v << ',' << fmt(state.p_if[v]) << ',' << fmt(state.p_it[v]) << ',' << (state.blocked[v] ? 1 : 0) << ','
              << to_string(state.labels[v]) << '\n';
        }
      });
      if (!i_metrics.empty()) {
        const auto m = intervention_metrics(state);
        json j = {{"sum_p_it", m.sum_p_it},        {"sum_p_if", m.sum_p_if},
                  {"infected", m.infected},        {"susceptible", m.susceptible},
                  {"protected", m.protected_count}, {"steps", m.steps},
                  {"true_creators", ic_t}};
        emit(i_metrics, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
      }
    } else if (*stats_cmd) {
      const auto sample = read_pairs(s_input);
      if (*wilcoxon_cmd) {
        const auto alt = parse_alternative(s_alt);
        const auto r = wilcoxon_one_tailed(sample, alt);
        json j = {{"alternative", to_string(alt)}, {"statistic", r.statistic},
                  {"p_one_tailed", r.p_one_tailed}, {"n_effective", r.n_effective},
                  {"method", to_string(r.method)},  {"variant", r.variant}};
        std::cout << j.dump(2) << '\n';
      } else {
        std::vector<double> x, y;
        for (const auto& [a, b] : sample.pairs) {
          x.push_back(a);
          y.push_back(b);
        }
        const auto sx = summarize(x);
        const auto sy = summarize(y);
        json j = {{"n", sample.pairs.size()},
                  {"x", {{"mean", sx.mean}, {"median", sx.median}}},
                  {"y", {{"mean", sy.mean}, {"median", sy.median}}}};
        std::cout << j.dump(2) << '\n';
      }
    } else if (*experiment_cmd) {
      const Scale scale = parse_scale(e_scale);
      if (*preset_cmd) {
        if (e_preset.empty()) {
          for (const auto& name : preset_names()) std::cout << name << '\n';
        } else {
          std::cout << to_json(apply_scale(preset(e_preset), scale)).dump(2) << '\n';
        }
        return 0;
      }
      if (e_threads == 0) throw InputError("--threads must be at least 1");
      const auto config = apply_scale(load_config(e_config), scale);
      std::error_code ec;
      std::filesystem::create_directories(e_out, ec);
      if (ec) throw IoError("cannot create '" + e_out + "': " + ec.message());
      const std::filesystem::path dir(e_out);
      if (config.mode == ExperimentMode::MinTrueSeeds) {
        const auto r = run_min_seed_search(config, e_threads);
        const auto j = to_json(r);
        emit((dir / "min_seeds.json").string(), [&](std::ostream& out) { out << j.dump(2) << '\n'; });
        for (const auto& [kind, search] : r.per_strategy) {
          std::cout << to_string(kind) << ' ' << (search.k ? std::to_string(*search.k) : std::string("none")) << '\n';
        }
      } else {
        const auto r = run_experiment(config, e_threads);
        export_results(r, (dir / "records.csv").string(), ExportFormat::Csv);
        export_results(r, (dir / "result.json").string(), ExportFormat::Json);
        std::cout << "strategy,sweep_value,metric,p_one_tailed,degenerate\n";
        for (const auto& c : r.comparisons) {
          std::cout << to_string(c.strategy) << ',' << (c.sweep_value ? fmt(*c.sweep_value) : std::string()) << ','
                    << c.metric << ',' << fmt(c.test.p_one_tailed) << ',' << (c.degenerate ? 1 : 0) << '\n';
        }
      }
    }
  } catch (const InputError& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const IoError& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 2;
  }
  return 0;
}
