#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wealthnet/errors.hpp"
#include "wealthnet/graph.hpp"
#include "wealthnet/linalg.hpp"
#include "wealthnet/model.hpp"
#include "wealthnet/state.hpp"

namespace wealthnet {

// Marks alive sites whose wealth fell below eps_death (or turned
// non-finite) as dead: x set to 0 exactly, never revived. Returns the
// newly dead sites in ascending order; callers record death times.
inline std::vector<std::size_t> apply_bankruptcy(TraderState& state,
                                                 double eps_death) {
  std::vector<std::size_t> newly_dead;
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    if (!state.alive[i]) continue;
    const double xi = state.x[i];
    if (!std::isfinite(xi) || xi < eps_death) {
      state.alive[i] = 0;
      state.x[i] = 0.0;
      newly_dead.push_back(i);
    }
  }
  return newly_dead;
}

namespace detail {

inline constexpr double kConditionLimit = 1e12;

struct StepWorkspace {
  std::vector<double> k1, k2, k3, k4;   // stage derivatives
  std::vector<double> stage_x;          // stage inputs
  std::vector<double> inv_x;            // 1/x at the current stage
  std::vector<double> coupling;         // 1/x - alpha*x per alive site
  std::vector<std::uint8_t> flagged;    // hit the floor mid-step
  std::vector<std::uint32_t> sys_sites; // implicit: dense row -> site
  std::vector<std::uint32_t> sys_row;   // implicit: site -> dense row
  std::vector<double> mat, rhs;         // implicit system

  void resize(std::size_t n) {
    k1.assign(n, 0.0);
    k2.assign(n, 0.0);
    k3.assign(n, 0.0);
    k4.assign(n, 0.0);
    stage_x.assign(n, 0.0);
    inv_x.assign(n, 0.0);
    coupling.assign(n, 0.0);
    flagged.assign(n, 0);
    sys_row.assign(n, 0);
  }
};

// First-order-in-g lattice dynamics:
//   x'_n = ((2a-1)/2 + g * sum_m (1/x_m - a*x_m)) * x_n - 1/x_n
// with m over alive, unflagged neighbors of n. Sites whose stage value
// dropped below eps_death (or went non-finite) are flagged: they
// contribute nothing from this stage on and die when the step completes.
inline void eval_first_order(const TraderState& state,
                             const std::vector<std::uint32_t>& alive_idx,
                             const Graph& graph, const ModelParams& params,
                             StepWorkspace& ws, std::vector<double>& k) {
  const double growth = 0.5 * (2.0 * params.alpha - 1.0);
  for (const std::uint32_t i : alive_idx) {
    if (ws.flagged[i]) continue;
    const double xi = ws.stage_x[i];
    if (!(xi >= params.eps_death)) {  // also catches NaN
      ws.flagged[i] = 1;
      continue;
    }
    const double inv = 1.0 / xi;
    ws.inv_x[i] = inv;
    ws.coupling[i] = inv - params.alpha * xi;
  }
  for (const std::uint32_t i : alive_idx) {
    if (ws.flagged[i]) {
      k[i] = 0.0;
      continue;
    }
    double acc = 0.0;
    for (const std::uint32_t m : graph.neighbors(i))
      if (state.alive[m] && !ws.flagged[m]) acc += ws.coupling[m];
    k[i] = (growth + params.g * acc) * ws.stage_x[i] - ws.inv_x[i];
  }
}

// Scaled dynamics with derivatives on both sides, rearranged as the alive
// subsystem (I + diag(x) G) x' = b with G_ij = g on edges and
//   b_i = ((2a-1)/2 - sum_j g*x_j/2) * x_i - 1/x_i.
// Each stage is one exact dense solve.
inline void eval_implicit(const TraderState& state,
                          const std::vector<std::uint32_t>& alive_idx,
                          const Graph& graph, const ModelParams& params,
                          StepWorkspace& ws, std::vector<double>& k) {
  const double growth = 0.5 * (2.0 * params.alpha - 1.0);
  ws.sys_sites.clear();
  for (const std::uint32_t i : alive_idx) {
    if (ws.flagged[i]) {
      k[i] = 0.0;
      continue;
    }
    const double xi = ws.stage_x[i];
    if (!(xi >= params.eps_death)) {
      ws.flagged[i] = 1;
      k[i] = 0.0;
      continue;
    }
    ws.inv_x[i] = 1.0 / xi;
    ws.sys_row[i] = static_cast<std::uint32_t>(ws.sys_sites.size());
    ws.sys_sites.push_back(i);
  }
  const std::size_t a = ws.sys_sites.size();
  if (a == 0) return;
  ws.mat.assign(a * a, 0.0);
  ws.rhs.resize(a);
  for (std::size_t r = 0; r < a; ++r) {
    const std::uint32_t i = ws.sys_sites[r];
    const double xi = ws.stage_x[i];
    double neighbor_wealth = 0.0;
    ws.mat[r * a + r] = 1.0;
    for (const std::uint32_t m : graph.neighbors(i)) {
      if (!state.alive[m] || ws.flagged[m]) continue;
      neighbor_wealth += ws.stage_x[m];
      ws.mat[r * a + ws.sys_row[m]] = params.g * xi;
    }
    ws.rhs[r] = (growth - 0.5 * params.g * neighbor_wealth) * xi - ws.inv_x[i];
  }
  try {
    const LuFactors lu(ws.mat, a);
    if (lu.condition_1() > kConditionLimit)
      throw integration_error("implicit coupling matrix singular");
    lu.solve(ws.rhs);
  } catch (const std::domain_error&) {
    throw integration_error("implicit coupling matrix singular");
  }
  for (std::size_t r = 0; r < a; ++r) k[ws.sys_sites[r]] = ws.rhs[r];
}

// One classical 4-stage Runge-Kutta step of length params.ds on the alive
// subsystem, followed by bankruptcy handling. Appends the sites that died
// to newly_dead. alive_idx must list the alive sites ascending; the caller
// prunes it afterwards.
inline void advance(TraderState& state, const Graph& graph,
                    const ModelParams& params,
                    const std::vector<std::uint32_t>& alive_idx,
                    StepWorkspace& ws, std::vector<std::size_t>& newly_dead) {
  const auto eval = (params.mode == IntegrationMode::Implicit)
                        ? eval_implicit
                        : eval_first_order;
  const double h = params.ds;
  std::fill(ws.flagged.begin(), ws.flagged.end(), 0);

  for (const std::uint32_t i : alive_idx) ws.stage_x[i] = state.x[i];
  eval(state, alive_idx, graph, params, ws, ws.k1);
  for (const std::uint32_t i : alive_idx)
    ws.stage_x[i] = state.x[i] + 0.5 * h * ws.k1[i];
  eval(state, alive_idx, graph, params, ws, ws.k2);
  for (const std::uint32_t i : alive_idx)
    ws.stage_x[i] = state.x[i] + 0.5 * h * ws.k2[i];
  eval(state, alive_idx, graph, params, ws, ws.k3);
  for (const std::uint32_t i : alive_idx)
    ws.stage_x[i] = state.x[i] + h * ws.k3[i];
  eval(state, alive_idx, graph, params, ws, ws.k4);

  state.s += h;
  for (const std::uint32_t i : alive_idx) {
    if (ws.flagged[i]) {
      state.x[i] = 0.0;
      state.alive[i] = 0;
      newly_dead.push_back(i);
      continue;
    }
    const double xn = state.x[i] + (h / 6.0) * (ws.k1[i] + 2.0 * ws.k2[i] +
                                                2.0 * ws.k3[i] + ws.k4[i]);
    if (!std::isfinite(xn))
      throw integration_error("non-finite wealth produced (overflow)", i);
    if (xn < params.eps_death) {
      state.x[i] = 0.0;
      state.alive[i] = 0;
      newly_dead.push_back(i);
    } else {
      state.x[i] = xn;
    }
  }
}

inline std::vector<std::uint32_t> alive_indices(const TraderState& state) {
  std::vector<std::uint32_t> idx;
  idx.reserve(state.x.size());
  for (std::size_t i = 0; i < state.x.size(); ++i)
    if (state.alive[i]) idx.push_back(static_cast<std::uint32_t>(i));
  return idx;
}

inline void check_state(const TraderState& state, const Graph& graph) {
  if (state.x.size() != graph.size() || state.alive.size() != graph.size())
    throw std::invalid_argument("state size does not match graph");
}

inline TraderState step_with_mode(const TraderState& state, const Graph& graph,
                                  const ModelParams& params,
                                  IntegrationMode expected) {
  params.validate();
  check_state(state, graph);
  if (params.mode != expected)
    throw std::invalid_argument(
        expected == IntegrationMode::FirstOrder
            ? "step: params.mode must be FirstOrder"
            : "step_implicit: params.mode must be Implicit");
  TraderState next = state;
  StepWorkspace ws;
  ws.resize(next.x.size());
  const auto alive_idx = alive_indices(next);
  std::vector<std::size_t> newly_dead;
  advance(next, graph, params, alive_idx, ws, newly_dead);
  return next;
}

}  // namespace detail

// Advances the first-order-in-g dynamics by one step of params.ds.
inline TraderState step(const TraderState& state, const Graph& graph,
                        const ModelParams& params) {
  return detail::step_with_mode(state, graph, params,
                                IntegrationMode::FirstOrder);
}

// Advances the full implicit dynamics by one step (one linear solve per
// Runge-Kutta stage).
inline TraderState step_implicit(const TraderState& state, const Graph& graph,
                                 const ModelParams& params) {
  return detail::step_with_mode(state, graph, params,
                                IntegrationMode::Implicit);
}

// Integrates from s = 0 until the horizon s_max or until a full
// stable_window has passed without a death. Samples the survival ratio
// every params.sample_every steps. Stage I ends at the first completed
// death-free gap of length params.stage_gap after at least one death; if
// no such gap completes before termination, s1 falls back to the final
// survival ratio (1 when nobody ever dies).
inline Trajectory run(const std::vector<double>& x0, const Graph& graph,
                      const ModelParams& params,
                      std::optional<std::size_t> watch = std::nullopt) {
  params.validate();
  const std::size_t n = graph.size();
  if (n == 0) throw std::invalid_argument("run: empty lattice");
  if (x0.size() != n)
    throw std::invalid_argument("run: x0 length does not match graph");
  for (std::size_t i = 0; i < n; ++i)
    if (!(x0[i] > 0.0))
      throw std::invalid_argument("run: initial wealth must be positive");
  if (watch && *watch >= n)
    throw std::invalid_argument("run: watched site out of range");

  Trajectory traj;
  traj.death_time.assign(n, std::nullopt);

  TraderState state;
  state.x = x0;
  state.alive.assign(n, 1);
  state.s = 0.0;

  std::size_t alive_count = n;
  bool any_death = false;
  double last_death_s = 0.0;
  for (const std::size_t i : apply_bankruptcy(state, params.eps_death)) {
    traj.death_time[i] = 0.0;
    --alive_count;
    any_death = true;
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  auto sample = [&]() {
    traj.samples.emplace_back(state.s, static_cast<double>(alive_count) * inv_n);
    if (watch) traj.watched.emplace_back(state.s, state.x[*watch]);
  };
  sample();

  detail::StepWorkspace ws;
  ws.resize(n);
  auto alive_idx = detail::alive_indices(state);
  std::vector<std::size_t> newly_dead;

  bool s1_set = false;
  std::size_t step_count = 0;
  for (;;) {
    if (state.s >= params.s_max) {
      traj.terminated_by = Termination::Horizon;
      break;
    }
    const double window_anchor = any_death ? last_death_s : 0.0;
    if (state.s - window_anchor >= params.stable_window) {
      traj.terminated_by = Termination::StableWindow;
      break;
    }
    newly_dead.clear();
    detail::advance(state, graph, params, alive_idx, ws, newly_dead);
    ++step_count;
    if (!newly_dead.empty()) {
      for (const std::size_t i : newly_dead) traj.death_time[i] = state.s;
      alive_count -= newly_dead.size();
      any_death = true;
      last_death_s = state.s;
      std::erase_if(alive_idx,
                    [&](std::uint32_t i) { return !state.alive[i]; });
    }
    if (!s1_set && any_death && state.s - last_death_s >= params.stage_gap) {
      traj.s1 = static_cast<double>(alive_count) * inv_n;
      s1_set = true;
    }
    if (step_count % params.sample_every == 0) sample();
  }
  if (traj.samples.empty() || traj.samples.back().first != state.s) sample();

  traj.s_inf = static_cast<double>(alive_count) * inv_n;
  if (!s1_set) traj.s1 = any_death ? traj.s_inf : 1.0;
  traj.final_state = std::move(state);
  return traj;
}

// Survive/collapse boundary in g for a symmetric pair of traders with
// inherited wealth x0 > X*, integrated in Implicit mode. The bracket is
// grown by doubling from g = 1, then bisected to within tol; the midpoint
// is returned.
//
// The probe integrates the pair system on its symmetric manifold, where
// the implicit equations reduce exactly to the scalar ODE
//   x' = ((a - g*x/2)*x - 1/x) / (1 + g*x),   a = (2*alpha - 1)/2,
// whose denominator never vanishes. (The full 2x2 pair matrix passes
// through a coordinate singularity at g*x = 1, which step_implicit
// rightly reports as an error; the reduction sidesteps it.)
inline double find_critical_coupling(double alpha, double x0, double tol) {
  const double xc = critical_wealth(alpha);
  if (!(x0 > xc))
    throw std::invalid_argument(
        "find_critical_coupling: x0 must exceed critical_wealth(alpha)");
  if (!(tol > 0.0))
    throw std::invalid_argument("find_critical_coupling: tol must be > 0");

  const double growth = 0.5 * (2.0 * alpha - 1.0);
  const double eps_death = 1e-4 * xc;
  const double ds = 1e-3;
  const double s_horizon = 200.0;

  // True when the pair goes bankrupt before the probe horizon.
  // Machine-stationary wealth above threshold is an early survive exit.
  const auto collapses = [&](double g) {
    const auto rate = [&](double x) {
      return ((growth - 0.5 * g * x) * x - 1.0 / x) / (1.0 + g * x);
    };
    double x = x0;
    for (double s = 0.0; s < s_horizon; s += ds) {
      const double k1 = rate(x);
      const double x2 = x + 0.5 * ds * k1;
      if (!(x2 >= eps_death)) return true;
      const double k2 = rate(x2);
      const double x3 = x + 0.5 * ds * k2;
      if (!(x3 >= eps_death)) return true;
      const double k3 = rate(x3);
      const double x4 = x + ds * k3;
      if (!(x4 >= eps_death)) return true;
      const double k4 = rate(x4);
      const double xn = x + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!(xn >= eps_death)) return true;
      if (std::abs(xn - x) < 1e-13 * xn) return false;
      x = xn;
    }
    return false;
  };

  double g_hi = 1.0;
  int doublings = 0;
  while (!collapses(g_hi)) {
    if (++doublings > 60)
      throw integration_error("no critical coupling found");
    g_hi *= 2.0;
  }
  double g_lo = 0.0;
  while (g_hi - g_lo > tol) {
    const double mid = 0.5 * (g_lo + g_hi);
    (collapses(mid) ? g_hi : g_lo) = mid;
  }
  return 0.5 * (g_lo + g_hi);
}

}  // namespace wealthnet
