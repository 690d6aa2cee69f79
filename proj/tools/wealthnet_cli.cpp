// Command-line front end: one experiment per invocation, everything
// reproducible from a config file plus a master seed. Flags mirror config
// keys and override the file.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wealthnet/wealthnet.hpp"

namespace fs = std::filesystem;
using wealthnet::json;

namespace {

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> sample_every;
  unsigned threads = wealthnet::default_thread_count();

  std::optional<double> alpha, g, ds, s_max, eps_death, stable_window,
      stage_gap;
  std::optional<std::string> mode;

  std::optional<std::string> topology;
  std::optional<std::size_t> n, width, height;
  std::optional<bool> periodic;
  std::optional<double> rewire_p;
  std::optional<std::size_t> rewire_cycles;

  std::optional<std::string> wealth_kind;
  std::optional<double> wealth_rate, wealth_s1, wealth_lo, wealth_hi,
      wealth_value;
  std::optional<std::string> wealth_file;
};

void add_common_flags(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("-c,--config", f.config_path, "JSON config file");
  cmd.add_option("--seed", f.seed, "master seed (embedded in all artifacts)");
  cmd.add_option("-o,--out", f.out_dir, "output directory");
  cmd.add_option("--sample-every", f.sample_every,
                 "sampling cadence in integration steps");
  cmd.add_option("--threads", f.threads,
                 "worker threads for ensemble members");

  cmd.add_option("--alpha", f.alpha, "wealth accretion parameter (> 1/2)");
  cmd.add_option("--g", f.g, "coupling strength on graph edges");
  cmd.add_option("--mode", f.mode, "integrator: first_order | implicit");
  cmd.add_option("--ds", f.ds, "integration step in reduced time");
  cmd.add_option("--s-max", f.s_max, "hard horizon in reduced time");
  cmd.add_option("--eps-death", f.eps_death, "bankruptcy threshold");
  cmd.add_option("--stable-window", f.stable_window,
                 "death-free window declaring the asymptote");
  cmd.add_option("--stage-gap", f.stage_gap,
                 "death-free gap that closes Stage I");

  cmd.add_option("--topology", f.topology, "ring | grid2d | complete");
  cmd.add_option("--n", f.n, "site count (ring/complete)");
  cmd.add_option("--width", f.width, "grid width");
  cmd.add_option("--height", f.height, "grid height");
  cmd.add_option("--periodic", f.periodic, "periodic grid boundaries");
  cmd.add_option("--rewire-p", f.rewire_p,
                 "pre-augmentation link probability");
  cmd.add_option("--rewire-cycles", f.rewire_cycles,
                 "pre-augmentation cycles");

  cmd.add_option("--wealth", f.wealth_kind,
                 "exponential | exponential_s1 | uniform | constant | explicit");
  cmd.add_option("--wealth-rate", f.wealth_rate, "exponential rate");
  cmd.add_option("--wealth-s1", f.wealth_s1,
                 "Stage-I survival target for exponential_s1");
  cmd.add_option("--wealth-lo", f.wealth_lo, "uniform lower bound");
  cmd.add_option("--wealth-hi", f.wealth_hi, "uniform upper bound");
  cmd.add_option("--wealth-value", f.wealth_value, "constant wealth value");
  cmd.add_option("--wealth-file", f.wealth_file,
                 "explicit wealth vector, one value per line");
}

json load_config_json(const CommonFlags& f) {
  if (!f.config_path) return json::object();
  std::ifstream in(*f.config_path);
  if (!in)
    throw wealthnet::io_error("cannot open config file '" + *f.config_path +
                              "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json root;
  try {
    root = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw wealthnet::config_error(std::string("config is not valid JSON: ") +
                                  e.what());
  }
  if (!root.is_object())
    throw wealthnet::config_error("config root must be an object");
  return root;
}

// Folds CLI overrides into the JSON document before the one true parse.
void apply_common_overrides(json& root, const CommonFlags& f,
                            const char* experiment_kind) {
  root["experiment"]["kind"] = experiment_kind;
  if (f.seed) root["master_seed"] = *f.seed;
  if (f.out_dir) root["output"]["dir"] = *f.out_dir;
  if (f.sample_every) root["output"]["sample_every"] = *f.sample_every;

  if (f.alpha) root["model"]["alpha"] = *f.alpha;
  if (f.g) root["model"]["g"] = *f.g;
  if (f.mode) root["model"]["mode"] = *f.mode;
  if (f.ds) root["model"]["ds"] = *f.ds;
  if (f.s_max) root["model"]["s_max"] = *f.s_max;
  if (f.eps_death) root["model"]["eps_death"] = *f.eps_death;
  if (f.stable_window) root["model"]["stable_window"] = *f.stable_window;
  if (f.stage_gap) root["model"]["stage_gap"] = *f.stage_gap;

  if (f.topology) root["topology"]["kind"] = *f.topology;
  if (f.n) root["topology"]["n"] = *f.n;
  if (f.width) root["topology"]["width"] = *f.width;
  if (f.height) root["topology"]["height"] = *f.height;
  if (f.periodic) root["topology"]["periodic"] = *f.periodic;
  if (f.rewire_p) root["topology"]["rewire"]["p"] = *f.rewire_p;
  if (f.rewire_cycles)
    root["topology"]["rewire"]["cycles"] = *f.rewire_cycles;

  if (f.wealth_kind) {
    root["wealth"] = json::object();
    root["wealth"]["kind"] = *f.wealth_kind;
  }
  if (f.wealth_rate) root["wealth"]["rate"] = *f.wealth_rate;
  if (f.wealth_s1) root["wealth"]["s1"] = *f.wealth_s1;
  if (f.wealth_lo) root["wealth"]["lo"] = *f.wealth_lo;
  if (f.wealth_hi) root["wealth"]["hi"] = *f.wealth_hi;
  if (f.wealth_value) root["wealth"]["value"] = *f.wealth_value;
  if (f.wealth_file) {
    std::ifstream in(*f.wealth_file);
    if (!in)
      throw wealthnet::io_error("cannot open wealth file '" + *f.wealth_file +
                                "'");
    root["wealth"] = json::object();
    root["wealth"]["kind"] = "explicit";
    root["wealth"]["values"] = wealthnet::read_wealth_file(in);
  }
}

int run_simulate(const CommonFlags& f) {
  json root = load_config_json(f);
  apply_common_overrides(root, f, "curve");
  const auto cfg = wealthnet::parse_config_json(root);
  const auto graph = cfg.topology.build(cfg.master_seed);
  const auto traj = wealthnet::survival_curve(graph, cfg.wealth, cfg.model);
  wealthnet::emit_curve(traj, cfg, cfg.output.dir);
  std::cout << "curve: n=" << graph.size() << " s1=" << traj.s1
            << " s_inf=" << traj.s_inf << " terminated_by "
            << wealthnet::to_string(traj.terminated_by) << " -> "
            << cfg.output.dir << "\n";
  return 0;
}

int run_sweep(const CommonFlags& f, const std::vector<double>& p_values,
              std::optional<std::size_t> n_configs,
              const std::vector<std::string>& schemes) {
  json root = load_config_json(f);
  apply_common_overrides(root, f, "sweep_p");
  if (!p_values.empty()) root["experiment"]["p_values"] = p_values;
  if (n_configs) root["experiment"]["n_configs"] = *n_configs;
  if (!schemes.empty()) root["experiment"]["schemes"] = schemes;
  const auto cfg = wealthnet::parse_config_json(root);
  const auto base = cfg.topology.build(cfg.master_seed);
  const auto report = wealthnet::sweep_p(
      base, cfg.experiment.schemes, cfg.experiment.p_values,
      cfg.experiment.n_configs, cfg.wealth, cfg.model, cfg.master_seed,
      f.threads);
  wealthnet::emit_sweep(report, cfg, cfg.output.dir);
  std::cout << "sweep_p: " << report.entries.size() << " rows -> "
            << cfg.output.dir << "\n";
  return 0;
}

int run_lazarus(const CommonFlags& f, std::optional<std::size_t> center,
                std::optional<std::string> trader_class,
                std::optional<std::size_t> n_links) {
  json root = load_config_json(f);
  apply_common_overrides(root, f, "lazarus");
  if (center) root["experiment"]["center"] = *center;
  if (trader_class) root["experiment"]["class"] = *trader_class;
  if (n_links) root["experiment"]["n_links"] = *n_links;
  const auto cfg = wealthnet::parse_config_json(root);
  const auto graph = cfg.topology.build(cfg.master_seed);
  const auto x0 = wealthnet::sample_initial_wealth(
      graph.size(), cfg.wealth, cfg.model.eps_death);
  std::size_t ties = 0;
  wealthnet::classify_traders(x0, cfg.model.alpha, *cfg.experiment.center,
                              &ties);
  if (ties > 0)
    std::cerr << "warning: " << ties
              << " trader(s) tie the center's wealth exactly; assigned to "
                 "the poorer class\n";
  const auto report = wealthnet::lazarus_run(
      graph, x0, *cfg.experiment.center, cfg.experiment.trader_class,
      cfg.experiment.n_links, cfg.model, cfg.master_seed);
  wealthnet::emit_lazarus(report, cfg, cfg.output.dir);
  std::cout << "lazarus: center " << report.center << " baseline "
            << wealthnet::to_string(report.baseline_fate) << ", with "
            << report.n_links << " links "
            << wealthnet::to_string(report.new_fate) << " -> "
            << cfg.output.dir << "\n";
  return 0;
}

int run_crossover(const CommonFlags& f, std::optional<std::size_t> center,
                  std::optional<std::string> trader_class,
                  std::optional<std::size_t> n_max) {
  json root = load_config_json(f);
  apply_common_overrides(root, f, "crossover");
  if (center) root["experiment"]["center"] = *center;
  if (trader_class) root["experiment"]["class"] = *trader_class;
  if (n_max) root["experiment"]["n_max"] = *n_max;
  const auto cfg = wealthnet::parse_config_json(root);
  const auto graph = cfg.topology.build(cfg.master_seed);
  const auto x0 = wealthnet::sample_initial_wealth(
      graph.size(), cfg.wealth, cfg.model.eps_death);
  const auto result = wealthnet::lazarus_crossover(
      graph, x0, *cfg.experiment.center, cfg.experiment.trader_class,
      cfg.experiment.n_max, cfg.model, cfg.master_seed);
  wealthnet::emit_crossover(result, cfg, cfg.output.dir);
  if (result.flip_n)
    std::cout << "crossover: fate flips at n=" << *result.flip_n << " -> "
              << cfg.output.dir << "\n";
  else
    std::cout << "crossover: no flip up to n_max=" << cfg.experiment.n_max
              << " -> " << cfg.output.dir << "\n";
  return 0;
}

int run_distributions(const CommonFlags& f,
                      const std::vector<double>& s1_targets) {
  json root = load_config_json(f);
  apply_common_overrides(root, f, "distributions");
  if (!s1_targets.empty()) root["experiment"]["s1_targets"] = s1_targets;
  const auto cfg = wealthnet::parse_config_json(root);
  const auto& targets = cfg.experiment.s1_targets;
  std::vector<std::optional<wealthnet::DistReport>> reports(targets.size());
  wealthnet::parallel_for_index(targets.size(), f.threads, [&](std::size_t i) {
    reports[i] = wealthnet::survivor_distributions(
        cfg.topology.width, cfg.topology.height, targets[i], cfg.model.alpha,
        cfg.model, cfg.master_seed);
  });
  for (std::size_t i = 0; i < targets.size(); ++i) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "s1_%g_", targets[i]);
    wealthnet::emit_distributions(*reports[i], cfg, cfg.output.dir, prefix);
    std::cout << "distributions: s1_target=" << targets[i]
              << " survivors=" << reports[i]->n_survivors << " -> "
              << cfg.output.dir << "\n";
  }
  return 0;
}

int run_validate(const CommonFlags& f) {
  json root = load_config_json(f);
  if (f.seed) root["master_seed"] = *f.seed;
  const auto cfg = wealthnet::parse_config_json(root);
  std::cout << wealthnet::emit_config(cfg).dump(2) << "\n";
  return 0;
}

int run_export_graph(const CommonFlags& f, std::optional<std::string> file) {
  json root = load_config_json(f);
  apply_common_overrides(root, f, "curve");
  const auto cfg = wealthnet::parse_config_json(root);
  const auto graph = cfg.topology.build(cfg.master_seed);
  const fs::path path =
      file ? fs::path(*file) : fs::path(cfg.output.dir) / "graph.edges";
  wealthnet::emit_graph(graph, path);
  std::cout << "graph: " << graph.size() << " sites, " << graph.edge_count()
            << " edges -> " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wealthnet: predatory-trader wealth dynamics on lattices and "
      "augmented networks"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* simulate = app.add_subcommand(
      "simulate", "integrate one configuration and emit the survival curve");
  add_common_flags(*simulate, flags);

  auto* sweep = app.add_subcommand(
      "sweep-p", "asymptotic survival versus wiring probability");
  add_common_flags(*sweep, flags);
  std::vector<double> p_values;
  std::optional<std::size_t> n_configs;
  std::vector<std::string> schemes;
  sweep->add_option("--p-values", p_values, "wiring probabilities in [0, 1]");
  sweep->add_option("--n-configs", n_configs, "network configurations per p");
  sweep->add_option("--schemes", schemes, "one_cycle and/or five_cycle");

  auto* lazarus = app.add_subcommand(
      "lazarus", "selective networking of one central trader");
  add_common_flags(*lazarus, flags);
  std::optional<std::size_t> center, n_links, n_max;
  std::optional<std::string> trader_class;
  lazarus->add_option("--center", center, "central site index");
  lazarus->add_option("--class", trader_class,
                      "non_survivor | poorer | richer");
  lazarus->add_option("--n-links", n_links, "non-local links to add");

  auto* crossover = app.add_subcommand(
      "crossover", "smallest link count that flips the center's fate");
  add_common_flags(*crossover, flags);
  crossover->add_option("--center", center, "central site index");
  crossover->add_option("--class", trader_class, "poorer | richer");
  crossover->add_option("--n-max", n_max, "largest link count to scan");

  auto* distributions = app.add_subcommand(
      "distributions", "survivor wealth-difference distributions on a grid");
  add_common_flags(*distributions, flags);
  std::vector<double> s1_targets;
  distributions->add_option("--s1-targets", s1_targets,
                            "Stage-I survival targets in (0, 1)");

  auto* validate = app.add_subcommand(
      "validate-config", "parse a config and print its resolved form");
  add_common_flags(*validate, flags);

  auto* export_graph = app.add_subcommand(
      "export-graph", "write the configured topology as an edge list");
  add_common_flags(*export_graph, flags);
  std::optional<std::string> graph_file;
  export_graph->add_option("--file", graph_file, "edge-list output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(flags);
    if (sweep->parsed()) return run_sweep(flags, p_values, n_configs, schemes);
    if (lazarus->parsed())
      return run_lazarus(flags, center, trader_class, n_links);
    if (crossover->parsed())
      return run_crossover(flags, center, trader_class, n_max);
    if (distributions->parsed()) return run_distributions(flags, s1_targets);
    if (validate->parsed()) return run_validate(flags);
    if (export_graph->parsed()) return run_export_graph(flags, graph_file);
  } catch (const wealthnet::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const wealthnet::integration_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const wealthnet::io_error& e) {
    std::cerr << "i/o failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
