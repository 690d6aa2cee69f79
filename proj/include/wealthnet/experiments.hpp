#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wealthnet/dynamics.hpp"
#include "wealthnet/graph.hpp"
#include "wealthnet/histogram.hpp"
#include "wealthnet/model.hpp"
#include "wealthnet/parallel.hpp"
#include "wealthnet/rng.hpp"
#include "wealthnet/sampling.hpp"
#include "wealthnet/state.hpp"
#include "wealthnet/stats.hpp"

namespace wealthnet {

enum class RewireScheme { OneCycle, FiveCycle };

inline std::size_t cycles_of(RewireScheme s) {
  return s == RewireScheme::OneCycle ? 1 : 5;
}

// Samples a wealth configuration for the graph and integrates it. The
// wealth sub-stream is selected by config_index so ensemble members draw
// independently; samples below the bankruptcy threshold are lifted.
inline Trajectory survival_curve(const Graph& graph,
                                 const WealthDistSpec& wealth,
                                 const ModelParams& params,
                                 std::uint64_t config_index = 0,
                                 std::optional<std::size_t> watch = std::nullopt) {
  const auto x0 = sample_initial_wealth(graph.size(), wealth,
                                        params.eps_death, config_index);
  return run(x0, graph, params, watch);
}

struct SweepEntry {
  double p = 0.0;
  RewireScheme scheme = RewireScheme::OneCycle;
  GraphKind dimension = GraphKind::Ring1D;
  double s_inf_mean = 0.0;
  double s_inf_stderr = 0.0;
  std::size_t n_configs = 0;

  bool operator==(const SweepEntry&) const = default;
};

struct SweepReport {
  std::vector<SweepEntry> entries;  // sorted by (scheme, p)

  bool operator==(const SweepReport&) const = default;
};

// Asymptotic survival versus wiring probability. For each p the base
// lattice is augmented n_configs times with independent topology
// sub-streams; the wealth sample is paired by config index, so every p
// (and both schemes) sees identical initial conditions per member. Means
// are aggregated in config order regardless of thread count.
inline SweepReport sweep_p(const Graph& base,
                           const std::vector<RewireScheme>& schemes,
                           const std::vector<double>& p_values,
                           std::size_t n_configs,
                           const WealthDistSpec& wealth,
                           const ModelParams& params,
                           std::uint64_t master_seed, unsigned threads = 1) {
  params.validate();
  if (n_configs < 1)
    throw std::invalid_argument("sweep_p: n_configs must be >= 1");
  for (double p : p_values)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("sweep_p: p values must lie in [0, 1]");

  struct Task {
    RewireScheme scheme;
    double p;
    std::size_t config;
  };
  std::vector<Task> tasks;
  for (const RewireScheme scheme : schemes)
    for (const double p : p_values)
      for (std::size_t c = 0; c < n_configs; ++c)
        tasks.push_back({scheme, p, c});

  std::vector<double> s_inf(tasks.size(), 0.0);
  parallel_for_index(tasks.size(), threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    RngStream topo(master_seed, "topology", task.config);
    const Graph g = rewire_cycles(base, task.p, cycles_of(task.scheme), topo);
    const auto x0 = sample_initial_wealth(base.size(), wealth,
                                          params.eps_death, task.config);
    s_inf[t] = run(x0, g, params).s_inf;
  });

  SweepReport report;
  std::size_t t = 0;
  for (const RewireScheme scheme : schemes) {
    for (const double p : p_values) {
      std::vector<double> values(s_inf.begin() + t,
                                 s_inf.begin() + t + n_configs);
      t += n_configs;
      SweepEntry e;
      e.p = p;
      e.scheme = scheme;
      e.dimension = base.kind();
      e.s_inf_mean = mean(values);
      e.s_inf_stderr = stderr_of_mean(values);
      e.n_configs = n_configs;
      report.entries.push_back(e);
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const SweepEntry& a, const SweepEntry& b) {
              if (a.scheme != b.scheme) return a.scheme < b.scheme;
              return a.p < b.p;
            });
  return report;
}

// Networking classes: eventual non-survivors sit below the threshold X*;
// would-be survivors are split by wealth relative to the chosen center.
enum class TraderClass {
  EventualNonSurvivor,
  WouldBeSurvivorPoorer,
  WouldBeSurvivorRicher,
};

// Exact ties with the center's wealth go to the Poorer class; the count of
// such ties is reported through tie_count so callers can log them.
inline std::vector<TraderClass> classify_traders(const std::vector<double>& x0,
                                                 double alpha,
                                                 std::size_t center,
                                                 std::size_t* tie_count = nullptr) {
  if (center >= x0.size())
    throw std::invalid_argument("classify_traders: center out of range");
  const double xc = critical_wealth(alpha);
  const double x_cm = x0[center];
  std::size_t ties = 0;
  std::vector<TraderClass> classes(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (x0[i] < xc) {
      classes[i] = TraderClass::EventualNonSurvivor;
    } else if (x0[i] > x_cm) {
      classes[i] = TraderClass::WouldBeSurvivorRicher;
    } else {
      if (x0[i] == x_cm && i != center) ++ties;
      classes[i] = TraderClass::WouldBeSurvivorPoorer;
    }
  }
  if (tie_count) *tie_count = ties;
  return classes;
}

struct LazarusReport {
  std::size_t center = 0;
  TraderClass class_used = TraderClass::EventualNonSurvivor;
  std::size_t n_links = 0;
  Fate baseline_fate = Fate::Dies;
  Fate new_fate = Fate::Dies;
  std::vector<std::pair<double, double>> xcm_series;  // augmented run
  std::optional<double> asymptotic_log_slope;
  double baseline_final_xcm = 0.0;
  double final_xcm = 0.0;
  std::vector<std::uint32_t> targets;
};

namespace detail {

// Class members eligible as non-local targets: everything of the wanted
// class except the center and its current neighbors.
inline std::vector<std::uint32_t> eligible_targets(
    const Graph& base, const std::vector<double>& x0, std::size_t center,
    TraderClass wanted, double alpha) {
  const auto classes = classify_traders(x0, alpha, center);
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (i == center || classes[i] != wanted) continue;
    if (base.adjacent(center, i)) continue;
    pool.push_back(static_cast<std::uint32_t>(i));
  }
  return pool;
}

inline Fate fate_of(const Trajectory& traj, std::size_t site) {
  return traj.final_state.alive[site] ? Fate::Survives : Fate::Dies;
}

inline bool neighbors_all_dead(const Trajectory& traj, const Graph& g,
                               std::size_t site) {
  for (const std::uint32_t m : g.neighbors(site))
    if (traj.final_state.alive[m]) return false;
  return true;
}

// d(ln x_cm)/ds over the run's closing stable_window, from the watched
// samples. Only meaningful once the center has outlived its neighborhood.
inline std::optional<double> closing_log_slope(const Trajectory& traj,
                                               const ModelParams& params) {
  const double s_end = traj.final_state.s;
  std::vector<double> ss, ln_x;
  for (const auto& [s, x] : traj.watched) {
    if (s < s_end - params.stable_window || !(x > 0.0)) continue;
    ss.push_back(s);
    ln_x.push_back(std::log(x));
  }
  if (ss.size() < 2) return std::nullopt;
  return least_squares_slope(ss, ln_x);
}

}  // namespace detail

// The selective-networking experiment: rerun an identical wealth
// configuration with the center non-locally linked to n_links uniformly
// chosen members of one class, and compare fates against the baseline.
inline LazarusReport lazarus_run(const Graph& base,
                                 const std::vector<double>& x0,
                                 std::size_t center, TraderClass class_filter,
                                 std::size_t n_links,
                                 const ModelParams& params,
                                 std::uint64_t master_seed) {
  params.validate();
  if (center >= base.size())
    throw std::invalid_argument("lazarus_run: center out of range");
  auto pool = detail::eligible_targets(base, x0, center, class_filter,
                                       params.alpha);
  if (pool.size() < n_links)
    throw std::invalid_argument(
        "lazarus_run: insufficient class members (" +
        std::to_string(pool.size()) + " eligible, " +
        std::to_string(n_links) + " requested)");
  RngStream stream(master_seed, "experiment");
  shuffle_prefix(pool, n_links, stream);
  const std::vector<std::uint32_t> targets(pool.begin(),
                                           pool.begin() + n_links);

  const Trajectory baseline = run(x0, base, params, center);
  const Graph augmented_graph = add_links(base, center, targets);
  const Trajectory augmented = run(x0, augmented_graph, params, center);

  LazarusReport report;
  report.center = center;
  report.class_used = class_filter;
  report.n_links = n_links;
  report.baseline_fate = detail::fate_of(baseline, center);
  report.new_fate = detail::fate_of(augmented, center);
  report.xcm_series = augmented.watched;
  report.baseline_final_xcm = baseline.final_state.x[center];
  report.final_xcm = augmented.final_state.x[center];
  report.targets = targets;
  if (report.new_fate == Fate::Survives &&
      detail::neighbors_all_dead(augmented, augmented_graph, center))
    report.asymptotic_log_slope = detail::closing_log_slope(augmented, params);
  return report;
}

struct CrossoverScan {
  std::size_t n_links = 0;
  Fate fate = Fate::Dies;
  double final_xcm = 0.0;
};

struct CrossoverResult {
  std::optional<std::size_t> flip_n;  // smallest n with survive -> die
  std::vector<CrossoverScan> scans;   // n = 0 (baseline) upward
  std::vector<std::uint32_t> target_order;  // nested prefix sets
};

// Fate of the center as the number of non-local would-be-survivor links
// grows through nested target sets (the set for n is a prefix of the set
// for n+1, so a flip is attributable to the added link). Stops at the
// first flip from Survives to Dies.
inline CrossoverResult lazarus_crossover(const Graph& base,
                                         const std::vector<double>& x0,
                                         std::size_t center,
                                         TraderClass class_filter,
                                         std::size_t n_max,
                                         const ModelParams& params,
                                         std::uint64_t master_seed) {
  params.validate();
  if (class_filter == TraderClass::EventualNonSurvivor)
    throw std::invalid_argument(
        "lazarus_crossover: class_filter must be a would-be-survivor class");
  if (center >= base.size())
    throw std::invalid_argument("lazarus_crossover: center out of range");

  auto pool = detail::eligible_targets(base, x0, center, class_filter,
                                       params.alpha);
  RngStream stream(master_seed, "experiment");
  shuffle_prefix(pool, pool.size(), stream);

  CrossoverResult result;
  result.target_order = pool;
  const std::size_t n_cap = std::min(n_max, pool.size());

  const Trajectory baseline = run(x0, base, params, center);
  Fate prev = detail::fate_of(baseline, center);
  result.scans.push_back({0, prev, baseline.final_state.x[center]});

  for (std::size_t n = 1; n <= n_cap; ++n) {
    const std::vector<std::uint32_t> targets(pool.begin(), pool.begin() + n);
    const Graph g = add_links(base, center, targets);
    const Trajectory traj = run(x0, g, params, center);
    const Fate fate = detail::fate_of(traj, center);
    result.scans.push_back({n, fate, traj.final_state.x[center]});
    if (prev == Fate::Survives && fate == Fate::Dies) {
      result.flip_n = n;
      break;
    }
    prev = fate;
  }
  return result;
}

struct DistReport {
  // Direction-resolved pairwise histograms of dX = X_cm - X_neighbor over
  // survivors, in the order right, left, bottom, top, plus the cumulative
  // sum over all four directions. All initial-wealth differences.
  std::vector<Histogram> pairwise;
  Histogram cumulative;
  std::optional<double> frac_against_odds_pairwise;
  std::optional<double> frac_against_odds_cumulative;
  double mu = 0.0;
  double s1_target = 0.0;
  double alpha = 0.0;
  std::size_t n_survivors = 0;
  // Raw difference tables behind the histograms (pairwise pooled over the
  // four directions); kept for quantile statistics and recount audits.
  std::vector<double> pairwise_deltas;
  std::vector<double> cumulative_deltas;
};

// Fraction of strictly negative entries: the share of survivors who won
// against the odds.
inline double against_odds_fraction(const std::vector<double>& deltas) {
  if (deltas.empty())
    throw std::invalid_argument("against_odds_fraction: empty input");
  std::size_t negatives = 0;
  for (double d : deltas)
    if (d < 0.0) ++negatives;
  return static_cast<double>(negatives) / static_cast<double>(deltas.size());
}

// Survivor wealth-difference statistics on a periodic grid seeded with
// Exponential(mu) wealth, mu = -ln(s1_target)/X*. For every survivor the
// initial wealth gap to each of its four original lattice neighbors goes
// into a direction-resolved histogram; their sum goes into the cumulative
// one.
inline DistReport survivor_distributions(std::size_t width, std::size_t height,
                                         double s1_target, double alpha,
                                         const ModelParams& params,
                                         std::uint64_t master_seed) {
  params.validate();
  const double mu = exponential_rate_for_s1(s1_target, alpha);
  const Graph grid = grid2d(width, height, true);

  WealthDistSpec wealth;
  wealth.dist = ExponentialWealth{mu};
  wealth.seed = master_seed;
  const auto x0 =
      sample_initial_wealth(grid.size(), wealth, params.eps_death);

  ModelParams run_params = params;
  run_params.alpha = alpha;
  const Trajectory traj = run(x0, grid, run_params);

  const double half_span_pair = 5.0 / mu;
  const double half_span_cum = 20.0 / mu;
  DistReport report{
      .pairwise = {},
      .cumulative = Histogram::uniform(-half_span_cum, half_span_cum, 101),
      .mu = mu,
      .s1_target = s1_target,
      .alpha = alpha,
  };
  for (int d = 0; d < 4; ++d)
    report.pairwise.push_back(
        Histogram::uniform(-half_span_pair, half_span_pair, 101));

  constexpr GridDirection kDirections[4] = {
      GridDirection::Right, GridDirection::Left, GridDirection::Bottom,
      GridDirection::Top};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!traj.final_state.alive[i]) continue;
    ++report.n_survivors;
    const double x_cm = x0[i];
    double cum = 0.0;
    for (int d = 0; d < 4; ++d) {
      const auto nb = grid_neighbor(grid, i, kDirections[d]);
      const double delta = x_cm - x0[*nb];
      report.pairwise[static_cast<std::size_t>(d)].add(delta);
      report.pairwise_deltas.push_back(delta);
      cum += delta;
    }
    report.cumulative.add(cum);
    report.cumulative_deltas.push_back(cum);
  }
  if (report.n_survivors > 0) {
    report.frac_against_odds_pairwise =
        against_odds_fraction(report.pairwise_deltas);
    report.frac_against_odds_cumulative =
        against_odds_fraction(report.cumulative_deltas);
  }
  return report;
}

}  // namespace wealthnet
