#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "support/config_corpus.hpp"
#include "wealthnet/config.hpp"
#include "wealthnet/io.hpp"

using namespace wealthnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wealthnet_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config resolves the documented defaults") {
  const RunConfig cfg = parse_config(
      R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":100}})");
  CHECK(cfg.model.alpha == 1.0);
  CHECK(cfg.model.g == 0.05);
  CHECK(cfg.model.ds == 1e-3);
  CHECK(cfg.model.s_max == 50.0);
  CHECK(cfg.model.stable_window == 10.0);
  CHECK(cfg.model.stage_gap == 2.0);
  CHECK(cfg.model.eps_death == doctest::Approx(1e-4 * std::sqrt(2.0)));
  CHECK(cfg.model.mode == IntegrationMode::FirstOrder);
  CHECK(cfg.master_seed == 0);
  CHECK(cfg.output.sample_every == 100);
  CHECK(cfg.topology.n == 100);
  const auto* e = std::get_if<ExponentialWealth>(&cfg.wealth.dist);
  REQUIRE(e != nullptr);
  CHECK(e->rate ==
        doctest::Approx(-std::log(0.8) / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("config rejections carry the offending path") {
  auto fails_with = [](const std::string& doc, const std::string& needle) {
    try {
      parse_config(doc);
      FAIL_CHECK("expected config_error for: " << doc);
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  fails_with(R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":100},
               "model":{"alpha":0.4}})",
             "alpha must exceed 1/2");
  fails_with(R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":100},
               "model":{"alfa":1.0}})",
             "model.alfa");
  fails_with(R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring"}})",
             "topology.n");
  fails_with(R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":"many"}})",
             "topology.n");
  fails_with(R"({"experiment":{"kind":"sweeps"},"topology":{"kind":"ring","n":100}})",
             "experiment.kind");
  fails_with(R"({"experiment":{"kind":"curve","n_links":3},"topology":{"kind":"ring","n":100}})",
             "experiment.n_links");
  fails_with(R"({"experiment":{"kind":"lazarus"},"topology":{"kind":"ring","n":100}})",
             "experiment.center");
  fails_with(R"({"experiment":{"kind":"lazarus","center":105},"topology":{"kind":"ring","n":100}})",
             "experiment.center");
  fails_with(R"({"experiment":{"kind":"crossover","center":3,"class":"non_survivor"},
               "topology":{"kind":"ring","n":100}})",
             "experiment.class");
  fails_with(R"({"experiment":{"kind":"distributions"},"topology":{"kind":"ring","n":100}})",
             "topology");
  fails_with(R"({"experiment":{"kind":"distributions"},
               "topology":{"kind":"grid2d","width":10,"height":10},
               "wealth":{"kind":"constant","value":2.0}})",
             "wealth");
  fails_with(R"({"experiment":{"kind":"sweep_p"},"topology":{"kind":"ring","n":100,
               "rewire":{"p":0.2}}})",
             "topology.rewire");
  fails_with(R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":5},
               "wealth":{"kind":"explicit","values":[1.0,2.0]}})",
             "wealth.values");
  fails_with(R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":100},
               "wealth":{"kind":"uniform","lo":3.0,"hi":1.0}})",
             "wealth");
  fails_with("not json at all", "not valid JSON");
}

TEST_CASE("parse/emit round trip over the corpus") {
  const auto corpus = testing::config_corpus();
  CHECK(corpus.size() >= 25);
  for (const auto& doc : corpus) {
    CAPTURE(doc);
    const RunConfig cfg = parse_config(doc);
    const json emitted = emit_config(cfg);
    const RunConfig back = parse_config_json(emitted);
    CHECK(back == cfg);
    // And the emitted canonical form is a fixed point.
    CHECK(emit_config(back) == emitted);
  }
}

TEST_CASE("curve artifacts: deathless run, determinism, headers") {
  const RunConfig cfg = parse_config(
      R"({"experiment":{"kind":"curve"},"topology":{"kind":"ring","n":16},
          "wealth":{"kind":"constant","value":3.0},
          "model":{"g":0.0,"s_max":4.0,"stable_window":3.0},
          "master_seed":11})");
  const Graph g = cfg.topology.build(cfg.master_seed);
  const Trajectory traj = survival_curve(g, cfg.wealth, cfg.model);

  const auto dir1 = fresh_dir("curve_a");
  const auto dir2 = fresh_dir("curve_b");
  emit_curve(traj, cfg, dir1);
  emit_curve(traj, cfg, dir2);

  const std::string csv = slurp(dir1 / "curve.csv");
  CHECK(csv == slurp(dir2 / "curve.csv"));
  CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));

  // Deathless run: the survival column is constantly 1.
  std::istringstream lines(csv);
  std::string line;
  bool in_data = false;
  while (std::getline(lines, line)) {
    if (line == "s,survival_ratio") {
      in_data = true;
      continue;
    }
    if (!in_data || line.empty()) continue;
    CHECK(line.substr(line.find(',') + 1) == "1");
  }
  CHECK(csv.find("# wealthnet") == 0);
  CHECK(csv.find("# master_seed 11") != std::string::npos);
  CHECK(csv.find("\"master_seed\":11") != std::string::npos);

  const json summary = json::parse(slurp(dir1 / "summary.json"));
  CHECK(summary["s1"] == 1.0);
  CHECK(summary["s_inf"] == 1.0);
  CHECK(summary["seed"] == 11);
  CHECK(summary["n"] == 16);
  CHECK(summary["mode"] == "first_order");
  CHECK(summary["config"]["topology"]["n"] == 16);
}

TEST_CASE("sweep artifact ordering and schema") {
  const RunConfig cfg = parse_config(
      R"({"experiment":{"kind":"sweep_p","p_values":[0.0,0.4,1.0],"n_configs":2},
          "topology":{"kind":"ring","n":40},
          "model":{"s_max":6.0,"stable_window":5.0},"master_seed":3})");
  const Graph base = cfg.topology.build(cfg.master_seed);
  const SweepReport report =
      sweep_p(base, cfg.experiment.schemes, cfg.experiment.p_values,
              cfg.experiment.n_configs, cfg.wealth, cfg.model, cfg.master_seed,
              2);
  const auto dir = fresh_dir("sweep");
  emit_sweep(report, cfg, dir);
  const std::string csv = slurp(dir / "sweep.csv");

  // 3 p-values x 2 schemes = 6 rows after the header, sorted by
  // (scheme, p) with one_cycle first.
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  bool in_data = false;
  while (std::getline(lines, line)) {
    if (line == "p,scheme,dimension,s_inf_mean,s_inf_stderr,n_configs") {
      in_data = true;
      continue;
    }
    if (in_data && !line.empty()) rows.push_back(line);
  }
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].find("0,one_cycle,ring_1d,") == 0);
  CHECK(rows[2].find("1,one_cycle,") == 0);
  CHECK(rows[3].find("0,five_cycle,") == 0);

  const auto dir2 = fresh_dir("sweep2");
  emit_sweep(report, cfg, dir2);
  CHECK(csv == slurp(dir2 / "sweep.csv"));
}

TEST_CASE("distribution artifacts: fractions reconcile with the CSVs") {
  const RunConfig cfg = parse_config(
      R"({"experiment":{"kind":"distributions","s1_targets":[0.7]},
          "topology":{"kind":"grid2d","width":100,"height":100},
          "model":{"alpha":0.75},"master_seed":606})");
  const DistReport report = survivor_distributions(
      cfg.topology.width, cfg.topology.height, 0.7, cfg.model.alpha, cfg.model,
      cfg.master_seed);
  const auto dir = fresh_dir("dist");
  emit_distributions(report, cfg, dir, "s1_0.7_");

  const json j = json::parse(slurp(dir / "s1_0.7_distributions.json"));
  REQUIRE(report.n_survivors > 0);
  CHECK(j["n_survivors"] == report.n_survivors);
  const double frac = j["frac_against_odds_pairwise"].get<double>();

  // Recount from the emitted per-direction histograms: the mass strictly
  // below zero is bracketed by the bins fully below zero (plus underflow)
  // and those plus the zero-straddling bin.
  static const char* dirs[4] = {"right", "left", "bottom", "top"};
  double lower_mass = 0.0, upper_mass = 0.0, total = 0.0;
  for (const char* d : dirs) {
    const std::string csv = slurp(dir / ("s1_0.7_pairwise_" + std::string(d) + ".csv"));
    std::istringstream lines(csv);
    std::string line;
    bool in_data = false;
    while (std::getline(lines, line)) {
      if (line == "bin_lo,bin_hi,count") {
        in_data = true;
        continue;
      }
      if (!in_data || line.empty()) continue;
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const double lo = std::stod(line.substr(0, c1));
      const double hi = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      const double count = std::stod(line.substr(c2 + 1));
      total += count;
      if (hi <= 0.0) lower_mass += count;
      if (lo < 0.0) upper_mass += count;
    }
    const json tails = j["tails"][d];
    lower_mass += tails["underflow"].get<double>();
    upper_mass += tails["underflow"].get<double>();
    total += tails["underflow"].get<double>() + tails["overflow"].get<double>();
  }
  CHECK(total == doctest::Approx(4.0 * static_cast<double>(report.n_survivors)));
  CHECK(frac * total >= lower_mass - 1e-9);
  CHECK(frac * total <= upper_mass + 1e-9);

  // Exact recount from the raw table.
  std::size_t neg = 0;
  for (double d : report.pairwise_deltas)
    if (d < 0.0) ++neg;
  CHECK(frac == doctest::Approx(static_cast<double>(neg) /
                                static_cast<double>(report.pairwise_deltas.size()))
                    .epsilon(1e-15));

  // All four direction CSVs share identical bin edges.
  for (int d = 1; d < 4; ++d)
    CHECK(report.pairwise[0].edges() ==
          report.pairwise[static_cast<std::size_t>(d)].edges());
}

TEST_CASE("zero-survivor distributions emit null fractions") {
  const RunConfig cfg = parse_config(
      R"({"experiment":{"kind":"distributions","s1_targets":[0.6]},
          "topology":{"kind":"grid2d","width":10,"height":10},
          "model":{"alpha":1.0,"g":0.3},"master_seed":5})");
  // Strong coupling on a tiny lattice: collapse is total.
  DistReport report = survivor_distributions(10, 10, 0.6, 1.0, cfg.model,
                                             cfg.master_seed);
  if (report.n_survivors == 0) {
    CHECK_FALSE(report.frac_against_odds_pairwise.has_value());
    const auto dir = fresh_dir("dist_zero");
    emit_distributions(report, cfg, dir);
    const json j = json::parse(slurp(dir / "distributions.json"));
    CHECK(j["frac_against_odds_pairwise"].is_null());
    CHECK(j["n_survivors"] == 0);
  } else {
    // Model collapse did not wipe the lattice for this seed; the
    // degenerate-emission path is still covered by hand below.
    DistReport empty{.pairwise = {},
                     .cumulative = Histogram::uniform(-1.0, 1.0, 11),
                     .mu = 1.0,
                     .s1_target = 0.6,
                     .alpha = 1.0};
    for (int d = 0; d < 4; ++d)
      empty.pairwise.push_back(Histogram::uniform(-1.0, 1.0, 11));
    const auto dir = fresh_dir("dist_zero");
    emit_distributions(empty, cfg, dir);
    const json j = json::parse(slurp(dir / "distributions.json"));
    CHECK(j["frac_against_odds_pairwise"].is_null());
    CHECK(j["n_survivors"] == 0);
  }
}

TEST_CASE("lazarus and crossover artifacts") {
  const RunConfig cfg = parse_config(
      R"({"experiment":{"kind":"lazarus","center":30,"class":"non_survivor","n_links":4},
          "topology":{"kind":"ring","n":60},
          "wealth":{"kind":"exponential_s1","s1":0.7},
          "model":{"s_max":12.0},"master_seed":8})");
  const Graph g = cfg.topology.build(cfg.master_seed);
  const auto x0 =
      sample_initial_wealth(g.size(), cfg.wealth, cfg.model.eps_death);
  const LazarusReport report =
      lazarus_run(g, x0, 30, TraderClass::EventualNonSurvivor, 4, cfg.model,
                  cfg.master_seed);
  const auto dir = fresh_dir("lazarus");
  emit_lazarus(report, cfg, dir);
  const json j = json::parse(slurp(dir / "lazarus.json"));
  CHECK(j["center"] == 30);
  CHECK(j["n_links"] == 4);
  CHECK((j["new_fate"] == "survives" || j["new_fate"] == "dies"));
  const std::string csv = slurp(dir / "xcm.csv");
  CHECK(csv.find("s,x_cm") != std::string::npos);

  const RunConfig ccfg = parse_config(
      R"({"experiment":{"kind":"crossover","center":30,"class":"richer","n_max":3},
          "topology":{"kind":"ring","n":60},
          "wealth":{"kind":"exponential_s1","s1":0.7},
          "model":{"s_max":12.0},"master_seed":8})");
  const CrossoverResult result =
      lazarus_crossover(g, x0, 30, TraderClass::WouldBeSurvivorRicher, 3,
                        ccfg.model, ccfg.master_seed);
  const auto cdir = fresh_dir("crossover");
  emit_crossover(result, ccfg, cdir);
  const json cj = json::parse(slurp(cdir / "crossover.json"));
  CHECK(cj["n_max"] == 3);
  CHECK((cj["flip_n"].is_null() || cj["flip_n"].is_number_unsigned()));
}

TEST_CASE("graph export and import through files") {
  const auto dir = fresh_dir("graph");
  const Graph g = grid2d(5, 4, true);
  emit_graph(g, dir / "graph.edges");
  const Graph back = load_graph(dir / "graph.edges");
  CHECK(back.size() == g.size());
  CHECK(back.edge_count() == g.edge_count());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::uint32_t j : g.neighbors(i)) CHECK(back.adjacent(i, j));
  CHECK_THROWS_AS(load_graph(dir / "missing.edges"), io_error);
}
