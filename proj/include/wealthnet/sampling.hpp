#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wealthnet/model.hpp"
#include "wealthnet/rng.hpp"

namespace wealthnet {

struct ExponentialWealth {
  double rate = 1.0;
  bool operator==(const ExponentialWealth&) const = default;
};
struct UniformWealth {
  double lo = 0.0, hi = 1.0;
  bool operator==(const UniformWealth&) const = default;
};
struct ConstantWealth {
  double value = 1.0;
  bool operator==(const ConstantWealth&) const = default;
};
struct ExplicitWealth {
  std::vector<double> values;
  bool operator==(const ExplicitWealth&) const = default;
};

struct WealthDistSpec {
  std::variant<ExponentialWealth, UniformWealth, ConstantWealth,
               ExplicitWealth>
      dist = ExponentialWealth{};
  std::uint64_t seed = 0;

  bool operator==(const WealthDistSpec&) const = default;

  void validate() const {
    if (const auto* e = std::get_if<ExponentialWealth>(&dist)) {
      if (!(e->rate > 0.0))
        throw std::invalid_argument("wealth spec: exponential rate must be > 0");
    } else if (const auto* u = std::get_if<UniformWealth>(&dist)) {
      if (!(u->lo > 0.0))
        throw std::invalid_argument("wealth spec: uniform lo must be > 0");
      if (!(u->lo < u->hi))
        throw std::invalid_argument("wealth spec: uniform needs lo < hi");
    } else if (const auto* c = std::get_if<ConstantWealth>(&dist)) {
      if (!(c->value > 0.0))
        throw std::invalid_argument("wealth spec: constant value must be > 0");
    } else if (const auto* x = std::get_if<ExplicitWealth>(&dist)) {
      for (double v : x->values)
        if (!(v > 0.0))
          throw std::invalid_argument(
              "wealth spec: explicit values must be > 0");
    }
  }
};

// Rate mu = -ln(s1_target) / X*(alpha): an Exponential(mu) draw exceeds
// the survival threshold with probability exactly s1_target, pinning the
// Stage-I survival ratio of a large population.
inline double exponential_rate_for_s1(double s1_target, double alpha) {
  if (!(s1_target > 0.0 && s1_target < 1.0))
    throw std::domain_error(
        "exponential_rate_for_s1: s1_target must lie in (0, 1)");
  return -std::log(s1_target) / critical_wealth(alpha);
}

// n positive wealth values, bit-deterministic for a fixed (spec, n,
// stream_index). Samples below eps_floor are lifted to 2*eps_floor so no
// trader is born bankrupt. stream_index selects the ensemble member's
// sub-stream; draws never depend on other streams' consumption.
inline std::vector<double> sample_initial_wealth(std::size_t n,
                                                 const WealthDistSpec& spec,
                                                 double eps_floor = 0.0,
                                                 std::uint64_t stream_index = 0) {
  if (n < 1) throw std::invalid_argument("sample_initial_wealth: n must be >= 1");
  spec.validate();
  std::vector<double> out;
  out.reserve(n);
  if (const auto* x = std::get_if<ExplicitWealth>(&spec.dist)) {
    if (x->values.size() != n)
      throw std::invalid_argument(
          "sample_initial_wealth: explicit wealth length mismatch (need " +
          std::to_string(n) + ", got " + std::to_string(x->values.size()) +
          ")");
    out = x->values;
  } else {
    RngStream rng(spec.seed, "wealth", stream_index);
    if (const auto* e = std::get_if<ExponentialWealth>(&spec.dist)) {
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(rng.next_exponential(e->rate));
    } else if (const auto* u = std::get_if<UniformWealth>(&spec.dist)) {
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(u->lo + rng.next_unit() * (u->hi - u->lo));
    } else {
      const double v = std::get<ConstantWealth>(spec.dist).value;
      out.assign(n, v);
    }
  }
  if (eps_floor > 0.0)
    for (double& v : out)
      if (v < eps_floor) v = 2.0 * eps_floor;
  return out;
}

// One-value-per-line text file, for the CLI's explicit-wealth flag.
inline std::vector<double> read_wealth_file(std::istream& in) {
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof() && in.fail())
    throw std::invalid_argument("wealth file: malformed value");
  return values;
}

}  // namespace wealthnet
