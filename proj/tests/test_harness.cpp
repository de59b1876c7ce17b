#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "infodiff/harness.hpp"

using namespace infodiff;

namespace {

ExperimentConfig small_er(std::size_t graphs = 12) {
  ExperimentConfig c;
  c.name = "small";
  c.generator = ErParams{60, 0.1};
  c.ensemble_size = graphs;
  c.info_starter = 3;
  c.master_seed = 99;
  return c;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_records_csv(out, r.records);
  return out.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("infodiff_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  auto c = preset("variance_sweep");
  c.strategies = {CentralityKind::Degree, CentralityKind::PageRank};
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  for (const auto& name : preset_names()) EXPECT_EQ(to_json(config_from_json(to_json(preset(name)))), to_json(preset(name)));
}

TEST(Config, UnknownKeysAreRejected) {
  auto j = to_json(small_er());
  j["extra"] = 1;
  EXPECT_THROW(config_from_json(j), InputError);
  j = to_json(small_er());
  j["generator"]["tau1"] = 3.0;
  EXPECT_THROW(config_from_json(j), InputError);
  j = to_json(small_er());
  j["diffusion"]["P"] = 0.5;
  EXPECT_THROW(config_from_json(j), InputError);
}

TEST(Config, InvalidValuesAreRejected) {
  auto j = to_json(small_er());
  j["strategies"] = {"katz"};
  EXPECT_THROW(config_from_json(j), InputError);
  j = to_json(small_er());
  j["info_starter"] = 61;
  EXPECT_THROW(config_from_json(j), InputError);
  j = to_json(small_er());
  j["sweep"] = {{"parameter", "transmission_prob"}, {"values", nlohmann::json::array()}};
  EXPECT_THROW(config_from_json(j), InputError);
  j = to_json(small_er());
  j["sweep"] = {{"parameter", "v"}, {"values", {1.0}}};
  EXPECT_NO_THROW(config_from_json(j));  // name is sweepable...
  EXPECT_THROW(run_experiment(config_from_json(j)), InputError);  // ...but not for an er generator
  j = to_json(small_er());
  j["ensemble_size"] = "many";
  EXPECT_THROW(config_from_json(j), InputError);
}

TEST(Config, LoadFromFile) {
  const auto path = temp_path("cfg.json");
  {
    std::ofstream out(path);
    out << to_json(small_er()).dump(2);
  }
  EXPECT_EQ(to_json(load_config(path.string())), to_json(small_er()));
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), IoError);
}

TEST(Config, DeskScaling) {
  const auto desk = apply_scale(preset("dense_er"), Scale::Desk);
  const auto& er = std::get<ErParams>(desk.generator);
  EXPECT_EQ(er.n, 200u);
  EXPECT_DOUBLE_EQ(er.edge_exist_prob, 0.2);
  EXPECT_EQ(desk.ensemble_size, 30u);
  const auto lfr = std::get<LfrParams>(apply_scale(preset("lfr"), Scale::Desk).generator);
  EXPECT_EQ(lfr.n, 200u);
  EXPECT_EQ(lfr.min_community, 10u);
  const auto sweep = apply_scale(preset("density_sweep"), Scale::Desk).sweep;
  ASSERT_TRUE(sweep);
  EXPECT_DOUBLE_EQ(sweep->values.back(), 0.5);
  EXPECT_EQ(to_json(apply_scale(preset("dense_er"), Scale::Paper)), to_json(preset("dense_er")));
  EXPECT_THROW(parse_scale("huge"), InputError);
}

TEST(Seeds, GraphSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 1000; ++i) seen.insert(graph_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(graph_seed(7, 3), graph_seed(7, 3));
  EXPECT_NE(graph_seed(7, 3), graph_seed(8, 3));
}

TEST(RunExperiment, RecordLayoutAndPairing) {
  const auto r = run_experiment(small_er(50), 4);
  // five centrality strategies plus the random baseline
  EXPECT_EQ(r.records.size(), 300u);
  EXPECT_EQ(r.config.strategies.back(), CentralityKind::Random);
  EXPECT_EQ(r.provenance.graph_seeds.size(), 50u);
  EXPECT_EQ(r.provenance.master_seed, 99u);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].graph_index, i % 50);
    EXPECT_EQ(r.records[i].strategy, r.config.strategies[i / 50]);
  }
  // 5 strategies x 2 single-mode metrics
  EXPECT_EQ(r.comparisons.size(), 10u);
  for (const auto& c : r.comparisons) {
    EXPECT_NE(c.strategy, CentralityKind::Random);
    EXPECT_GE(c.test.p_one_tailed, 0.0);
    EXPECT_LE(c.test.p_one_tailed, 1.0);
  }
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
  const auto a = run_experiment(small_er(), 1);
  const auto b = run_experiment(small_er(), 3);
  EXPECT_EQ(csv_of(a), csv_of(b));
  EXPECT_EQ(a.provenance.graph_seeds, b.provenance.graph_seeds);
  auto other = small_er();
  other.master_seed = 100;
  EXPECT_NE(csv_of(a), csv_of(run_experiment(other, 2)));
}

TEST(RunExperiment, StrategiesShareTheSameGraph) {
  // Every strategy on graph i sees the graph generated from graph_seed(i):
  // rerunning one strategy alone reproduces its records exactly.
  auto cfg = small_er();
  const auto all = run_experiment(cfg, 2);
  cfg.strategies = {CentralityKind::Closeness};
  const auto one = run_experiment(cfg, 2);
  for (std::size_t i = 0; i < cfg.ensemble_size; ++i) {
    const auto& lhs = one.records[i];
    const auto it = std::find_if(all.records.begin(), all.records.end(), [&](const RunRecord& r) {
      return r.strategy == CentralityKind::Closeness && r.graph_index == i;
    });
    ASSERT_NE(it, all.records.end());
    EXPECT_EQ(lhs, *it);
  }
}

TEST(RunExperiment, InterventionModeSharesFalseCreators) {
  auto cfg = small_er(8);
  cfg.mode = ExperimentMode::Intervention;
  cfg.false_info_starter = 3;
  cfg.true_info_starter = 5;
  const auto r = run_experiment(cfg, 2);
  EXPECT_EQ(r.records.size(), 48u);
  EXPECT_EQ(r.comparisons.size(), 5u * 4u);
  for (const auto& rec : r.records) EXPECT_EQ(rec.infected + rec.susceptible + rec.protected_count, 60u);
  // The false process never reads true beliefs, so its belief sum is the
  // same for every strategy on a given graph.
  for (const auto& rec : r.records) EXPECT_DOUBLE_EQ(rec.sum_p_i, r.records[rec.graph_index].sum_p_i);
}

TEST(RunExperiment, CompleteGraphGivesDegenerateComparisons) {
  auto cfg = small_er(6);
  cfg.generator = ErParams{20, 1.0};
  const auto r = run_experiment(cfg);
  ASSERT_FALSE(r.comparisons.empty());
  for (const auto& c : r.comparisons) {
    EXPECT_TRUE(c.degenerate);
    EXPECT_EQ(c.test.p_one_tailed, 1.0);
  }
}

TEST(RunExperiment, GenerationFailureNamesTheGraph) {
  auto cfg = small_er(3);
  cfg.generator = LfrParams{100, 2.0, 1.5, 0.1, 20.0, 2};
  try {
    run_experiment(cfg);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError& e) {
    EXPECT_NE(std::string(e.what()).find("graph "), std::string::npos);
  }
}

TEST(RunExperiment, MinSeedModeNeedsItsOwnEntryPoint) {
  auto cfg = small_er(2);
  cfg.mode = ExperimentMode::MinTrueSeeds;
  EXPECT_THROW(run_experiment(cfg), InputError);
}

TEST(Sweeps, DensityGridOfOneGivesNoAdvantage) {
  auto cfg = small_er(5);
  cfg.generator = ErParams{30, 0.5};
  const auto r = run_density_sweep(cfg, {1.0});
  for (const auto& a : advantage_curves(r, "sum_p_i")) EXPECT_NEAR(a.mean, 0.0, 1e-9);
  for (const auto& a : advantage_curves(r, "iterations")) EXPECT_EQ(a.mean, 0.0);
}

TEST(Sweeps, EmptyGridsAndWrongGeneratorsAreErrors) {
  EXPECT_THROW(run_density_sweep(small_er(), {}), InputError);
  EXPECT_THROW(run_variance_sweep(small_er(), {1.0}), InputError);
  auto g = small_er();
  g.generator = GaussianPartitionParams{60, 10, 5, 0.3, 0.01};
  EXPECT_THROW(run_density_sweep(g, {0.1}), InputError);
  EXPECT_THROW(run_variance_sweep(g, {}), InputError);
  EXPECT_THROW(advantage_curves(run_experiment(small_er(2)), "nope"), InputError);
}

TEST(Sweeps, TransmissionProbabilityRaisesMeanBelief) {
  auto cfg = small_er(10);
  cfg.sweep = Sweep{"transmission_prob", {0.1, 0.3, 0.5, 0.7, 0.9}};
  const auto r = run_experiment(cfg, 2);
  EXPECT_EQ(r.records.size(), 5u * 6u * 10u);
  std::map<CentralityKind, double> previous;
  for (const auto& [kind, point, mean] : ensemble_means(r, "sum_p_i")) {
    ASSERT_TRUE(point);
    if (previous.count(kind)) { EXPECT_GT(mean, previous[kind]); }
    previous[kind] = mean;
  }
}

TEST(Sweeps, VarianceSweepRegeneratesGraphsPerPoint) {
  ExperimentConfig cfg;
  cfg.generator = GaussianPartitionParams{80, 10, 10, 0.3, 0.02};
  cfg.ensemble_size = 4;
  const auto r = run_variance_sweep(cfg, {10, 1}, 2);
  EXPECT_EQ(r.records.size(), 2u * 6u * 4u);
  EXPECT_EQ(r.comparisons.size(), 2u * 5u * 2u);
}

TEST(Sweeps, DensityAdvantageShrinksAsGraphsFillIn) {
  // Centrality seeding helps most in sparse graphs; near-complete graphs
  // leave nothing to choose between.
  auto cfg = small_er(20);
  cfg.generator = ErParams{80, 0.05};
  cfg.strategies = {CentralityKind::Degree};
  const auto r = run_density_sweep(cfg, {0.05, 0.9}, 4);
  const auto curves = advantage_curves(r, "sum_p_i");
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_GT(curves[0].mean, curves[1].mean);
}

TEST(Export, CsvRoundTripIsExact) {
  const auto r = run_experiment(small_er(4), 2);
  std::istringstream in(csv_of(r));
  EXPECT_EQ(read_records_csv(in), r.records);
  const auto text = csv_of(r);
  EXPECT_EQ(text.substr(0, text.find('\n')), kRecordCsvHeader);

  auto cfg = small_er(3);
  cfg.sweep = Sweep{"threshold", {0.25, 0.75}};
  const auto s = run_experiment(cfg);
  std::istringstream in2(csv_of(s));
  EXPECT_EQ(read_records_csv(in2), s.records);
}

TEST(Export, JsonRoundTrip) {
  auto cfg = small_er(4);
  cfg.sweep = Sweep{"transmission_prob", {0.2, 0.6}};
  const auto r = run_experiment(cfg);
  const auto back = result_from_json(nlohmann::json::parse(to_json(r).dump()));
  EXPECT_EQ(back.records, r.records);
  EXPECT_EQ(to_json(back), to_json(r));
}

TEST(Export, FilesAndBadPaths) {
  const auto r = run_experiment(small_er(2));
  const auto csv = temp_path("records.csv");
  export_results(r, csv.string(), ExportFormat::Csv);
  std::ifstream in(csv);
  EXPECT_EQ(read_records_csv(in), r.records);
  std::filesystem::remove(csv);
  EXPECT_THROW(export_results(r, "/nonexistent/dir/out.csv", ExportFormat::Csv), IoError);
}

TEST(Export, MalformedCsvIsAnInputError) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_records_csv(bad_header), InputError);
  std::istringstream bad_row(std::string(kRecordCsvHeader) + "\ndegree,x,,1,2,3,4,5,6\n");
  EXPECT_THROW(read_records_csv(bad_row), InputError);
}

TEST(MinSeedSearch, RunsEveryStrategyOnTheSameEnsemble) {
  ExperimentConfig cfg;
  cfg.generator = ErParams{60, 0.15};
  cfg.ensemble_size = 4;
  cfg.false_info_starter = 3;
  cfg.combat = {0.5, 0.4, 0.4, 0.1};
  cfg.k_max = 20;
  cfg.master_seed = 3;
  const auto r = run_min_seed_search(cfg, 3);
  ASSERT_EQ(r.per_strategy.size(), 6u);
  for (const auto& [kind, search] : r.per_strategy) {
    if (search.k) {
      EXPECT_GE(*search.k, 1u);
      EXPECT_LE(*search.k, 20u);
      ASSERT_GE(search.curve.size(), *search.k);
      const auto [prot, inf] = search.curve[*search.k - 1];
      EXPECT_GE(prot, inf);
    }
  }
  const auto again = run_min_seed_search(cfg, 1);
  EXPECT_EQ(to_json(again)["strategies"], to_json(r)["strategies"]);
}

TEST(ParallelFor, PropagatesTheFirstFailure) {
  EXPECT_THROW(parallel_for(10, 4, [](std::size_t i) { if (i == 7) throw InputError("boom"); }), InputError);
  std::vector<int> hits(100, 0);
  parallel_for(100, 8, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Presets, AllNamesResolve) {
  for (const auto& name : preset_names()) EXPECT_NO_THROW(validate(preset(name))) << name;
  EXPECT_THROW(preset("nope"), InputError);
  EXPECT_EQ(preset("min_seeds_er").mode, ExperimentMode::MinTrueSeeds);
}
