#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace wealthnet {

// Scaled-variable state of the whole population at reduced time s.
// Invariants: dead sites hold x == 0 exactly; alive sites hold
// x >= eps_death; vectors match the graph's site count.
struct TraderState {
  std::vector<double> x;
  std::vector<std::uint8_t> alive;
  double s = 0.0;

  std::size_t alive_count() const {
    std::size_t c = 0;
    for (auto a : alive) c += a;
    return c;
  }
};

enum class Termination { StableWindow, Horizon };
enum class Fate { Survives, Dies };

struct Trajectory {
  // (s, survival ratio), sampled every params.sample_every steps plus the
  // initial and final instants. Non-increasing in the second component.
  std::vector<std::pair<double, double>> samples;
  // Reduced time of bankruptcy per site; empty optional for survivors.
  std::vector<std::optional<double>> death_time;
  double s1 = 1.0;     // survival ratio at the end of Stage I
  double s_inf = 1.0;  // asymptotic survival ratio
  TraderState final_state;
  Termination terminated_by = Termination::Horizon;
  // (s, x[watched site]) at sample cadence, when a watch was requested.
  std::vector<std::pair<double, double>> watched;
};

}  // namespace wealthnet
