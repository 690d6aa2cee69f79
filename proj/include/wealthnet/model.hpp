#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

namespace wealthnet {

enum class IntegrationMode { FirstOrder, Implicit };

// Survival threshold X* = sqrt(2/(2*alpha - 1)) for an isolated trader.
// Below it the inflation term -1/X wins and wealth hits zero in finite
// reduced time; above it wealth grows without bound.
inline double critical_wealth(double alpha) {
  if (!(alpha > 0.5))
    throw std::domain_error(
        "critical_wealth: alpha must exceed 1/2 (no finite survival "
        "threshold)");
  return std::sqrt(2.0 / (2.0 * alpha - 1.0));
}

struct ModelParams {
  double alpha = 1.0;  // wealth accretion parameter
  double g = 0.05;     // uniform coupling strength on graph edges
  IntegrationMode mode = IntegrationMode::FirstOrder;
  double ds = 1e-3;            // integration step in reduced time s
  double s_max = 50.0;         // hard horizon
  double eps_death = 0.0;      // bankruptcy threshold on scaled wealth
  double stable_window = 10.0; // no-death window declaring the asymptote
  double stage_gap = 2.0;      // death-free gap that closes Stage I
  std::size_t sample_every = 100;  // sampling cadence, in steps

  bool operator==(const ModelParams&) const = default;

  // Fully resolved parameter set; eps_death defaults to 1e-4 * X*(alpha).
  static ModelParams defaults(double alpha = 1.0) {
    ModelParams p;
    p.alpha = alpha;
    p.eps_death = 1e-4 * critical_wealth(alpha);
    return p;
  }

  void validate() const {
    if (!(alpha > 0.5))
      throw std::invalid_argument("ModelParams: alpha must exceed 1/2");
    if (!(g >= 0.0))
      throw std::invalid_argument("ModelParams: g must be >= 0");
    if (!(ds > 0.0)) throw std::invalid_argument("ModelParams: ds must be > 0");
    if (!(s_max > 0.0))
      throw std::invalid_argument("ModelParams: s_max must be > 0");
    if (!(stable_window > 0.0))
      throw std::invalid_argument("ModelParams: stable_window must be > 0");
    if (!(stage_gap > 0.0))
      throw std::invalid_argument("ModelParams: stage_gap must be > 0");
    if (!(ds < stable_window))
      throw std::invalid_argument("ModelParams: ds must be < stable_window");
    if (!(ds < s_max))
      throw std::invalid_argument("ModelParams: ds must be < s_max");
    if (!(eps_death > 0.0))
      throw std::invalid_argument("ModelParams: eps_death must be > 0");
    if (!(eps_death < critical_wealth(alpha)))
      throw std::invalid_argument(
          "ModelParams: eps_death must be below critical_wealth(alpha)");
    if (sample_every < 1)
      throw std::invalid_argument("ModelParams: sample_every must be >= 1");
  }
};

// Physical-to-scaled variable transform: X = m/sqrt(t), s = ln(t/t0).
inline std::pair<double, double> to_scaled(double m, double t, double t0) {
  if (!(t0 > 0.0)) throw std::domain_error("to_scaled: t0 must be positive");
  if (!(t >= t0)) throw std::domain_error("to_scaled: t must be >= t0");
  if (!(m >= 0.0)) throw std::domain_error("to_scaled: m must be >= 0");
  return {m / std::sqrt(t), std::log(t / t0)};
}

// Exact solution for an isolated trader. In u = X^2 the dynamics are
// linear, u' = (2*alpha - 1)*u - 2, so
//   X(s) = sqrt((x0^2 - X*^2) * exp((2*alpha - 1)*s) + X*^2)
// while the radicand is positive, and 0 from the bankruptcy time onward.
inline double single_trader_closed_form(double x0, double alpha, double s) {
  if (!(x0 >= 0.0))
    throw std::domain_error("single_trader_closed_form: x0 must be >= 0");
  if (!(s >= 0.0))
    throw std::domain_error("single_trader_closed_form: s must be >= 0");
  const double xc = critical_wealth(alpha);
  const double rate = 2.0 * alpha - 1.0;
  const double radicand =
      (x0 * x0 - xc * xc) * std::exp(rate * s) + xc * xc;
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

// Bankruptcy time s_d = ln(X*^2 / (X*^2 - x0^2)) / (2*alpha - 1) of an
// isolated sub-threshold trader; nullopt for survivors (x0 >= X*).
inline std::optional<double> single_trader_death_time(double x0,
                                                      double alpha) {
  if (!(x0 >= 0.0))
    throw std::domain_error("single_trader_death_time: x0 must be >= 0");
  const double xc = critical_wealth(alpha);
  if (x0 >= xc) return std::nullopt;
  const double rate = 2.0 * alpha - 1.0;
  return std::log(xc * xc / (xc * xc - x0 * x0)) / rate;
}

}  // namespace wealthnet
