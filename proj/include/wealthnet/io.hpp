#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wealthnet/config.hpp"
#include "wealthnet/experiments.hpp"
#include "wealthnet/histogram.hpp"
#include "wealthnet/state.hpp"
#include "wealthnet/version.hpp"

namespace wealthnet {

// 17 significant digits: enough for a bit-exact double round-trip.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  if (ec)
    throw io_error("cannot create directory '" + path.parent_path().string() +
                   "': " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  return out;
}

inline void finish_output(std::ofstream& out,
                          const std::filesystem::path& path) {
  out.flush();
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

// Every artifact embeds the version, the master seed, and the full
// resolved config; artifacts with equal headers have equal data sections.
inline void write_csv_header(std::ofstream& out, const RunConfig& cfg) {
  out << "# wealthnet " << kVersion << " format " << kFormatVersion << "\n";
  out << "# master_seed " << cfg.master_seed << "\n";
  out << "# config " << emit_config(cfg).dump() << "\n";
}

inline json artifact_json(const RunConfig& cfg) {
  json j;
  j["version"] = std::string(kVersion);
  j["format"] = kFormatVersion;
  j["master_seed"] = cfg.master_seed;
  j["config"] = emit_config(cfg);
  return j;
}

inline void write_json(const json& j, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << j.dump(2) << "\n";
  finish_output(out, path);
}

inline void write_histogram_csv(const Histogram& h, const RunConfig& cfg,
                                const std::filesystem::path& path) {
  auto out = open_output(path);
  write_csv_header(out, cfg);
  out << "bin_lo,bin_hi,count\n";
  const auto& edges = h.edges();
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    out << fmt17(edges[k]) << "," << fmt17(edges[k + 1]) << ","
        << h.counts()[k] << "\n";
  finish_output(out, path);
}

}  // namespace detail

// curve.csv (s, survival ratio) and summary.json.
inline void emit_curve(const Trajectory& traj, const RunConfig& cfg,
                       const std::filesystem::path& dir) {
  {
    const auto path = dir / "curve.csv";
    auto out = detail::open_output(path);
    detail::write_csv_header(out, cfg);
    out << "s,survival_ratio\n";
    for (const auto& [s, ratio] : traj.samples)
      out << fmt17(s) << "," << fmt17(ratio) << "\n";
    detail::finish_output(out, path);
  }
  json j = detail::artifact_json(cfg);
  j["s1"] = traj.s1;
  j["s_inf"] = traj.s_inf;
  j["terminated_by"] = to_string(traj.terminated_by);
  j["n"] = traj.death_time.size();
  j["alpha"] = cfg.model.alpha;
  j["g"] = cfg.model.g;
  j["seed"] = cfg.master_seed;
  j["mode"] = to_string(cfg.model.mode);
  detail::write_json(j, dir / "summary.json");
}

// sweep.csv, one row per (scheme, p), plus a JSON sidecar.
inline void emit_sweep(const SweepReport& report, const RunConfig& cfg,
                       const std::filesystem::path& dir) {
  {
    const auto path = dir / "sweep.csv";
    auto out = detail::open_output(path);
    detail::write_csv_header(out, cfg);
    out << "p,scheme,dimension,s_inf_mean,s_inf_stderr,n_configs\n";
    for (const SweepEntry& e : report.entries)
      out << fmt17(e.p) << "," << to_string(e.scheme) << ","
          << to_string(e.dimension) << "," << fmt17(e.s_inf_mean) << ","
          << fmt17(e.s_inf_stderr) << "," << e.n_configs << "\n";
    detail::finish_output(out, path);
  }
  json j = detail::artifact_json(cfg);
  json entries = json::array();
  for (const SweepEntry& e : report.entries)
    entries.push_back({{"p", e.p},
                       {"scheme", to_string(e.scheme)},
                       {"dimension", to_string(e.dimension)},
                       {"s_inf_mean", e.s_inf_mean},
                       {"s_inf_stderr", e.s_inf_stderr},
                       {"n_configs", e.n_configs}});
  j["entries"] = entries;
  detail::write_json(j, dir / "sweep.json");
}

// One histogram CSV per direction plus the cumulative one, all sharing
// bin edges within their group, and a JSON summary. `prefix` keeps
// multiple s1 targets apart in one output directory.
inline void emit_distributions(const DistReport& report, const RunConfig& cfg,
                               const std::filesystem::path& dir,
                               const std::string& prefix = "") {
  static const char* kDirNames[4] = {"right", "left", "bottom", "top"};
  json j = detail::artifact_json(cfg);
  json hists;
  for (int d = 0; d < 4; ++d) {
    const auto& h = report.pairwise[static_cast<std::size_t>(d)];
    detail::write_histogram_csv(
        h, cfg, dir / (prefix + "pairwise_" + kDirNames[d] + ".csv"));
    hists[kDirNames[d]] = {{"underflow", h.underflow()},
                           {"overflow", h.overflow()}};
  }
  detail::write_histogram_csv(report.cumulative, cfg,
                              dir / (prefix + "cumulative.csv"));
  hists["cumulative"] = {{"underflow", report.cumulative.underflow()},
                         {"overflow", report.cumulative.overflow()}};
  j["mu"] = report.mu;
  j["s1_target"] = report.s1_target;
  j["alpha"] = report.alpha;
  j["n_survivors"] = report.n_survivors;
  j["frac_against_odds_pairwise"] =
      report.frac_against_odds_pairwise
          ? json(*report.frac_against_odds_pairwise)
          : json(nullptr);
  j["frac_against_odds_cumulative"] =
      report.frac_against_odds_cumulative
          ? json(*report.frac_against_odds_cumulative)
          : json(nullptr);
  j["tails"] = hists;
  detail::write_json(j, dir / (prefix + "distributions.json"));
}

// xcm.csv with the augmented run's center trajectory, and lazarus.json.
inline void emit_lazarus(const LazarusReport& report, const RunConfig& cfg,
                         const std::filesystem::path& dir) {
  {
    const auto path = dir / "xcm.csv";
    auto out = detail::open_output(path);
    detail::write_csv_header(out, cfg);
    out << "s,x_cm\n";
    for (const auto& [s, x] : report.xcm_series)
      out << fmt17(s) << "," << fmt17(x) << "\n";
    detail::finish_output(out, path);
  }
  json j = detail::artifact_json(cfg);
  j["center"] = report.center;
  j["class"] = to_string(report.class_used);
  j["n_links"] = report.n_links;
  j["baseline_fate"] = to_string(report.baseline_fate);
  j["new_fate"] = to_string(report.new_fate);
  j["baseline_final_xcm"] = report.baseline_final_xcm;
  j["final_xcm"] = report.final_xcm;
  j["asymptotic_log_slope"] = report.asymptotic_log_slope
                                  ? json(*report.asymptotic_log_slope)
                                  : json(nullptr);
  detail::write_json(j, dir / "lazarus.json");
}

// crossover.csv with the fate scan and crossover.json with the flip count.
inline void emit_crossover(const CrossoverResult& result, const RunConfig& cfg,
                           const std::filesystem::path& dir) {
  {
    const auto path = dir / "crossover.csv";
    auto out = detail::open_output(path);
    detail::write_csv_header(out, cfg);
    out << "n_links,fate,final_xcm\n";
    for (const CrossoverScan& scan : result.scans)
      out << scan.n_links << "," << to_string(scan.fate) << ","
          << fmt17(scan.final_xcm) << "\n";
    detail::finish_output(out, path);
  }
  json j = detail::artifact_json(cfg);
  j["center"] = *cfg.experiment.center;
  j["class"] = to_string(cfg.experiment.trader_class);
  j["n_max"] = cfg.experiment.n_max;
  j["flip_n"] = result.flip_n ? json(*result.flip_n) : json(nullptr);
  detail::write_json(j, dir / "crossover.json");
}

inline void emit_graph(const Graph& g, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_edge_list(g, out);
  detail::finish_output(out, path);
}

inline Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
  return read_edge_list(in);
}

}  // namespace wealthnet
