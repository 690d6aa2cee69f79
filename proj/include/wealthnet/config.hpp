#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wealthnet/errors.hpp"
#include "wealthnet/experiments.hpp"
#include "wealthnet/graph.hpp"
#include "wealthnet/model.hpp"
#include "wealthnet/rng.hpp"
#include "wealthnet/sampling.hpp"

namespace wealthnet {

using json = nlohmann::json;

enum class ExperimentKind { Curve, SweepP, Lazarus, Crossover, Distributions };
enum class TopologyKind { Ring, Grid2D, Complete };

struct RewireSpec {
  double p = 0.0;
  std::size_t cycles = 1;
  bool operator==(const RewireSpec&) const = default;
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::Ring;
  std::size_t n = 0;               // ring / complete
  std::size_t width = 0, height = 0;
  bool periodic = true;            // grid2d
  std::optional<RewireSpec> rewire;

  bool operator==(const TopologySpec&) const = default;

  std::size_t site_count() const {
    return kind == TopologyKind::Grid2D ? width * height : n;
  }

  // Builds the configured graph; a rewire block draws from the topology
  // sub-stream of the master seed.
  Graph build(std::uint64_t master_seed) const {
    Graph g;
    switch (kind) {
      case TopologyKind::Ring: g = ring(n); break;
      case TopologyKind::Grid2D: g = grid2d(width, height, periodic); break;
      case TopologyKind::Complete: g = complete(n); break;
    }
    if (rewire) {
      RngStream stream(master_seed, "topology");
      g = rewire_cycles(g, rewire->p, rewire->cycles, stream);
    }
    return g;
  }
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Curve;
  // sweep_p
  std::vector<double> p_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::size_t n_configs = 10;
  std::vector<RewireScheme> schemes = {RewireScheme::OneCycle,
                                       RewireScheme::FiveCycle};
  // lazarus / crossover
  std::optional<std::size_t> center;
  TraderClass trader_class = TraderClass::EventualNonSurvivor;
  std::size_t n_links = 100;
  std::size_t n_max = 20;
  // distributions
  std::vector<double> s1_targets = {0.6, 0.7, 0.8, 0.9};

  bool operator==(const ExperimentSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  std::size_t sample_every = 100;
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  std::uint64_t master_seed = 0;
  ModelParams model = ModelParams::defaults();
  TopologySpec topology;
  WealthDistSpec wealth;
  ExperimentSpec experiment;
  OutputSpec output;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path,
                                     const std::string& what) {
  throw config_error(path.empty() ? what : path + ": " + what);
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      config_fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

inline const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  return v.get<double>();
}

inline std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) config_fail(path, "expected an unsigned integer");
  return v.get<std::size_t>();
}

inline std::uint64_t as_seed(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) config_fail(path, "expected an unsigned integer");
  return v.get<std::uint64_t>();
}

inline bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) config_fail(path, "expected a boolean");
  return v.get<bool>();
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) config_fail(path, "expected a string");
  return v.get<std::string>();
}

inline const json& as_object(const json& v, const std::string& path) {
  if (!v.is_object()) config_fail(path, "expected an object");
  return v;
}

inline std::vector<double> as_number_list(const json& v,
                                          const std::string& path) {
  if (!v.is_array()) config_fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, path));
  return out;
}

template <typename Enum>
Enum parse_enum(const json& v, const std::string& path,
                std::initializer_list<std::pair<const char*, Enum>> table) {
  const std::string s = as_string(v, path);
  for (const auto& [name, value] : table)
    if (s == name) return value;
  std::string options;
  for (const auto& [name, value] : table) {
    if (!options.empty()) options += ", ";
    options += name;
  }
  config_fail(path, "unknown value '" + s + "' (expected one of: " + options +
                        ")");
}

}  // namespace detail

inline const char* to_string(IntegrationMode m) {
  return m == IntegrationMode::FirstOrder ? "first_order" : "implicit";
}
inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Curve: return "curve";
    case ExperimentKind::SweepP: return "sweep_p";
    case ExperimentKind::Lazarus: return "lazarus";
    case ExperimentKind::Crossover: return "crossover";
    case ExperimentKind::Distributions: return "distributions";
  }
  return "curve";
}
inline const char* to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Grid2D: return "grid2d";
    case TopologyKind::Complete: return "complete";
  }
  return "ring";
}
inline const char* to_string(RewireScheme s) {
  return s == RewireScheme::OneCycle ? "one_cycle" : "five_cycle";
}
inline const char* to_string(TraderClass c) {
  switch (c) {
    case TraderClass::EventualNonSurvivor: return "non_survivor";
    case TraderClass::WouldBeSurvivorPoorer: return "poorer";
    case TraderClass::WouldBeSurvivorRicher: return "richer";
  }
  return "non_survivor";
}
inline const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Ring1D: return "ring_1d";
    case GraphKind::Grid2D: return "grid_2d";
    case GraphKind::Complete: return "complete";
    case GraphKind::Augmented: return "augmented";
  }
  return "augmented";
}
inline const char* to_string(Termination t) {
  return t == Termination::StableWindow ? "stable_window" : "horizon";
}
inline const char* to_string(Fate f) {
  return f == Fate::Survives ? "survives" : "dies";
}

// Parses and fully resolves a configuration document. Unknown keys are
// hard errors carrying the offending path; every default is filled in, so
// the returned config round-trips bit-exactly through emit_config.
inline RunConfig parse_config_json(const json& root) {
  using namespace detail;
  if (!root.is_object()) config_fail("", "config root must be an object");
  reject_unknown_keys(root, "", {"master_seed", "model", "topology", "wealth",
                                 "experiment", "output"});
  RunConfig cfg;
  if (const json* v = find(root, "master_seed"))
    cfg.master_seed = as_seed(*v, "master_seed");

  // -- model ---------------------------------------------------------
  double alpha = 1.0;
  {
    const json* m = find(root, "model");
    if (m) {
      as_object(*m, "model");
      reject_unknown_keys(*m, "model",
                          {"alpha", "g", "mode", "ds", "s_max", "eps_death",
                           "stable_window", "stage_gap"});
      if (const json* v = find(*m, "alpha")) alpha = as_number(*v, "model.alpha");
    }
    if (!(alpha > 0.5)) config_fail("model.alpha", "alpha must exceed 1/2");
    cfg.model = ModelParams::defaults(alpha);
    if (m) {
      if (const json* v = find(*m, "g")) cfg.model.g = as_number(*v, "model.g");
      if (const json* v = find(*m, "mode"))
        cfg.model.mode = parse_enum<IntegrationMode>(
            *v, "model.mode",
            {{"first_order", IntegrationMode::FirstOrder},
             {"implicit", IntegrationMode::Implicit}});
      if (const json* v = find(*m, "ds")) cfg.model.ds = as_number(*v, "model.ds");
      if (const json* v = find(*m, "s_max"))
        cfg.model.s_max = as_number(*v, "model.s_max");
      if (const json* v = find(*m, "eps_death"))
        cfg.model.eps_death = as_number(*v, "model.eps_death");
      if (const json* v = find(*m, "stable_window"))
        cfg.model.stable_window = as_number(*v, "model.stable_window");
      if (const json* v = find(*m, "stage_gap"))
        cfg.model.stage_gap = as_number(*v, "model.stage_gap");
    }
  }

  // -- topology ------------------------------------------------------
  {
    const json* t = find(root, "topology");
    if (!t) config_fail("topology", "section is required");
    as_object(*t, "topology");
    if (!find(*t, "kind")) config_fail("topology.kind", "key is required");
    cfg.topology.kind = parse_enum<TopologyKind>(
        *find(*t, "kind"), "topology.kind",
        {{"ring", TopologyKind::Ring},
         {"grid2d", TopologyKind::Grid2D},
         {"complete", TopologyKind::Complete}});
    if (cfg.topology.kind == TopologyKind::Grid2D) {
      reject_unknown_keys(*t, "topology",
                          {"kind", "width", "height", "periodic", "rewire"});
      if (!find(*t, "width") || !find(*t, "height"))
        config_fail("topology", "grid2d requires width and height");
      cfg.topology.width = as_count(*find(*t, "width"), "topology.width");
      cfg.topology.height = as_count(*find(*t, "height"), "topology.height");
      if (const json* v = find(*t, "periodic"))
        cfg.topology.periodic = as_bool(*v, "topology.periodic");
      if (cfg.topology.width < 3 || cfg.topology.height < 3)
        config_fail("topology", "grid2d dimensions must be >= 3");
    } else {
      reject_unknown_keys(*t, "topology", {"kind", "n", "rewire"});
      if (!find(*t, "n"))
        config_fail("topology.n", "key is required for ring/complete");
      cfg.topology.n = as_count(*find(*t, "n"), "topology.n");
      const std::size_t min_n = cfg.topology.kind == TopologyKind::Ring ? 3 : 2;
      if (cfg.topology.n < min_n)
        config_fail("topology.n",
                    "must be >= " + std::to_string(min_n));
    }
    if (const json* r = find(*t, "rewire")) {
      as_object(*r, "topology.rewire");
      reject_unknown_keys(*r, "topology.rewire", {"p", "cycles"});
      RewireSpec spec;
      if (!find(*r, "p")) config_fail("topology.rewire.p", "key is required");
      spec.p = as_number(*find(*r, "p"), "topology.rewire.p");
      if (!(spec.p >= 0.0 && spec.p <= 1.0))
        config_fail("topology.rewire.p", "must lie in [0, 1]");
      if (const json* v = find(*r, "cycles"))
        spec.cycles = as_count(*v, "topology.rewire.cycles");
      if (spec.cycles < 1)
        config_fail("topology.rewire.cycles", "must be >= 1");
      cfg.topology.rewire = spec;
    }
  }

  // -- experiment ----------------------------------------------------
  {
    const json* e = find(root, "experiment");
    if (!e) config_fail("experiment", "section is required");
    as_object(*e, "experiment");
    if (!find(*e, "kind")) config_fail("experiment.kind", "key is required");
    cfg.experiment.kind = parse_enum<ExperimentKind>(
        *find(*e, "kind"), "experiment.kind",
        {{"curve", ExperimentKind::Curve},
         {"sweep_p", ExperimentKind::SweepP},
         {"lazarus", ExperimentKind::Lazarus},
         {"crossover", ExperimentKind::Crossover},
         {"distributions", ExperimentKind::Distributions}});
    switch (cfg.experiment.kind) {
      case ExperimentKind::Curve:
        reject_unknown_keys(*e, "experiment", {"kind"});
        break;
      case ExperimentKind::SweepP: {
        reject_unknown_keys(*e, "experiment",
                            {"kind", "p_values", "n_configs", "schemes"});
        if (const json* v = find(*e, "p_values")) {
          cfg.experiment.p_values = as_number_list(*v, "experiment.p_values");
          if (cfg.experiment.p_values.empty())
            config_fail("experiment.p_values", "must not be empty");
          for (double p : cfg.experiment.p_values)
            if (!(p >= 0.0 && p <= 1.0))
              config_fail("experiment.p_values", "values must lie in [0, 1]");
        }
        if (const json* v = find(*e, "n_configs")) {
          cfg.experiment.n_configs = as_count(*v, "experiment.n_configs");
          if (cfg.experiment.n_configs < 1)
            config_fail("experiment.n_configs", "must be >= 1");
        }
        if (const json* v = find(*e, "schemes")) {
          if (!v->is_array() || v->empty())
            config_fail("experiment.schemes", "expected a non-empty array");
          cfg.experiment.schemes.clear();
          for (const auto& s : *v)
            cfg.experiment.schemes.push_back(parse_enum<RewireScheme>(
                s, "experiment.schemes",
                {{"one_cycle", RewireScheme::OneCycle},
                 {"five_cycle", RewireScheme::FiveCycle}}));
        }
        if (cfg.topology.rewire)
          config_fail("topology.rewire",
                      "sweep_p augments internally; remove the rewire block");
        if (cfg.topology.kind == TopologyKind::Complete)
          config_fail("topology.kind", "sweep_p needs a ring or grid2d base");
        break;
      }
      case ExperimentKind::Lazarus:
      case ExperimentKind::Crossover: {
        const bool lazarus = cfg.experiment.kind == ExperimentKind::Lazarus;
        if (lazarus)
          reject_unknown_keys(*e, "experiment",
                              {"kind", "center", "class", "n_links"});
        else
          reject_unknown_keys(*e, "experiment",
                              {"kind", "center", "class", "n_max"});
        if (!find(*e, "center"))
          config_fail("experiment.center", "key is required");
        cfg.experiment.center = as_count(*find(*e, "center"),
                                         "experiment.center");
        if (*cfg.experiment.center >= cfg.topology.site_count())
          config_fail("experiment.center", "site index out of range");
        if (const json* v = find(*e, "class"))
          cfg.experiment.trader_class = parse_enum<TraderClass>(
              *v, "experiment.class",
              {{"non_survivor", TraderClass::EventualNonSurvivor},
               {"poorer", TraderClass::WouldBeSurvivorPoorer},
               {"richer", TraderClass::WouldBeSurvivorRicher}});
        else if (!lazarus)
          cfg.experiment.trader_class = TraderClass::WouldBeSurvivorPoorer;
        if (lazarus) {
          if (const json* v = find(*e, "n_links"))
            cfg.experiment.n_links = as_count(*v, "experiment.n_links");
        } else {
          if (const json* v = find(*e, "n_max"))
            cfg.experiment.n_max = as_count(*v, "experiment.n_max");
          if (cfg.experiment.trader_class == TraderClass::EventualNonSurvivor)
            config_fail("experiment.class",
                        "crossover requires a would-be-survivor class "
                        "(poorer or richer)");
        }
        break;
      }
      case ExperimentKind::Distributions: {
        reject_unknown_keys(*e, "experiment", {"kind", "s1_targets"});
        if (const json* v = find(*e, "s1_targets")) {
          cfg.experiment.s1_targets = as_number_list(*v, "experiment.s1_targets");
          if (cfg.experiment.s1_targets.empty())
            config_fail("experiment.s1_targets", "must not be empty");
          for (double s1 : cfg.experiment.s1_targets)
            if (!(s1 > 0.0 && s1 < 1.0))
              config_fail("experiment.s1_targets",
                          "targets must lie in (0, 1)");
        }
        if (cfg.topology.kind != TopologyKind::Grid2D || !cfg.topology.periodic)
          config_fail("topology",
                      "distributions requires a periodic grid2d topology");
        if (cfg.topology.rewire)
          config_fail("topology.rewire",
                      "distributions runs on the bare lattice; remove the "
                      "rewire block");
        if (find(root, "wealth"))
          config_fail("wealth",
                      "distributions derives wealth from s1_targets; remove "
                      "the wealth section");
        break;
      }
    }
  }

  // -- wealth --------------------------------------------------------
  cfg.wealth.seed = cfg.master_seed;
  if (cfg.experiment.kind != ExperimentKind::Distributions) {
    const json* w = find(root, "wealth");
    if (!w) {
      // Documented default: exponential targeting a Stage-I survival
      // ratio of 0.8 at the configured alpha.
      cfg.wealth.dist =
          ExponentialWealth{exponential_rate_for_s1(0.8, alpha)};
    } else {
      as_object(*w, "wealth");
      if (!find(*w, "kind")) config_fail("wealth.kind", "key is required");
      const std::string kind = as_string(*find(*w, "kind"), "wealth.kind");
      if (kind == "exponential") {
        reject_unknown_keys(*w, "wealth", {"kind", "rate"});
        if (!find(*w, "rate")) config_fail("wealth.rate", "key is required");
        cfg.wealth.dist =
            ExponentialWealth{as_number(*find(*w, "rate"), "wealth.rate")};
      } else if (kind == "exponential_s1") {
        reject_unknown_keys(*w, "wealth", {"kind", "s1"});
        if (!find(*w, "s1")) config_fail("wealth.s1", "key is required");
        const double s1 = as_number(*find(*w, "s1"), "wealth.s1");
        if (!(s1 > 0.0 && s1 < 1.0))
          config_fail("wealth.s1", "must lie in (0, 1)");
        cfg.wealth.dist = ExponentialWealth{exponential_rate_for_s1(s1, alpha)};
      } else if (kind == "uniform") {
        reject_unknown_keys(*w, "wealth", {"kind", "lo", "hi"});
        if (!find(*w, "lo") || !find(*w, "hi"))
          config_fail("wealth", "uniform requires lo and hi");
        cfg.wealth.dist = UniformWealth{as_number(*find(*w, "lo"), "wealth.lo"),
                                        as_number(*find(*w, "hi"), "wealth.hi")};
      } else if (kind == "constant") {
        reject_unknown_keys(*w, "wealth", {"kind", "value"});
        if (!find(*w, "value")) config_fail("wealth.value", "key is required");
        cfg.wealth.dist =
            ConstantWealth{as_number(*find(*w, "value"), "wealth.value")};
      } else if (kind == "explicit") {
        reject_unknown_keys(*w, "wealth", {"kind", "values"});
        if (!find(*w, "values")) config_fail("wealth.values", "key is required");
        cfg.wealth.dist = ExplicitWealth{
            as_number_list(*find(*w, "values"), "wealth.values")};
      } else {
        config_fail("wealth.kind",
                    "unknown value '" + kind +
                        "' (expected one of: exponential, exponential_s1, "
                        "uniform, constant, explicit)");
      }
    }
    try {
      cfg.wealth.validate();
    } catch (const std::invalid_argument& e) {
      config_fail("wealth", e.what());
    }
    if (const auto* x = std::get_if<ExplicitWealth>(&cfg.wealth.dist))
      if (x->values.size() != cfg.topology.site_count())
        config_fail("wealth.values",
                    "explicit wealth length must equal the site count (" +
                        std::to_string(cfg.topology.site_count()) + ")");
  }

  // -- output --------------------------------------------------------
  if (const json* o = find(root, "output")) {
    as_object(*o, "output");
    reject_unknown_keys(*o, "output", {"dir", "sample_every"});
    if (const json* v = find(*o, "dir"))
      cfg.output.dir = as_string(*v, "output.dir");
    if (const json* v = find(*o, "sample_every")) {
      cfg.output.sample_every = as_count(*v, "output.sample_every");
      if (cfg.output.sample_every < 1)
        config_fail("output.sample_every", "must be >= 1");
    }
  }
  cfg.model.sample_every = cfg.output.sample_every;

  try {
    cfg.model.validate();
  } catch (const std::invalid_argument& e) {
    config_fail("model", e.what());
  }
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config_json(root);
}

// Canonical resolved form; parse_config_json(emit_config(cfg)) == cfg for
// every valid config.
inline json emit_config(const RunConfig& cfg) {
  json root;
  root["master_seed"] = cfg.master_seed;
  root["model"] = {{"alpha", cfg.model.alpha},
                   {"g", cfg.model.g},
                   {"mode", to_string(cfg.model.mode)},
                   {"ds", cfg.model.ds},
                   {"s_max", cfg.model.s_max},
                   {"eps_death", cfg.model.eps_death},
                   {"stable_window", cfg.model.stable_window},
                   {"stage_gap", cfg.model.stage_gap}};
  json topo;
  topo["kind"] = to_string(cfg.topology.kind);
  if (cfg.topology.kind == TopologyKind::Grid2D) {
    topo["width"] = cfg.topology.width;
    topo["height"] = cfg.topology.height;
    topo["periodic"] = cfg.topology.periodic;
  } else {
    topo["n"] = cfg.topology.n;
  }
  if (cfg.topology.rewire)
    topo["rewire"] = {{"p", cfg.topology.rewire->p},
                      {"cycles", cfg.topology.rewire->cycles}};
  root["topology"] = topo;

  json exp;
  exp["kind"] = to_string(cfg.experiment.kind);
  switch (cfg.experiment.kind) {
    case ExperimentKind::Curve:
      break;
    case ExperimentKind::SweepP: {
      exp["p_values"] = cfg.experiment.p_values;
      exp["n_configs"] = cfg.experiment.n_configs;
      json schemes = json::array();
      for (const RewireScheme s : cfg.experiment.schemes)
        schemes.push_back(to_string(s));
      exp["schemes"] = schemes;
      break;
    }
    case ExperimentKind::Lazarus:
      exp["center"] = *cfg.experiment.center;
      exp["class"] = to_string(cfg.experiment.trader_class);
      exp["n_links"] = cfg.experiment.n_links;
      break;
    case ExperimentKind::Crossover:
      exp["center"] = *cfg.experiment.center;
      exp["class"] = to_string(cfg.experiment.trader_class);
      exp["n_max"] = cfg.experiment.n_max;
      break;
    case ExperimentKind::Distributions:
      exp["s1_targets"] = cfg.experiment.s1_targets;
      break;
  }
  root["experiment"] = exp;

  if (cfg.experiment.kind != ExperimentKind::Distributions) {
    json w;
    if (const auto* e = std::get_if<ExponentialWealth>(&cfg.wealth.dist)) {
      w["kind"] = "exponential";
      w["rate"] = e->rate;
    } else if (const auto* u = std::get_if<UniformWealth>(&cfg.wealth.dist)) {
      w["kind"] = "uniform";
      w["lo"] = u->lo;
      w["hi"] = u->hi;
    } else if (const auto* c = std::get_if<ConstantWealth>(&cfg.wealth.dist)) {
      w["kind"] = "constant";
      w["value"] = c->value;
    } else {
      w["kind"] = "explicit";
      w["values"] = std::get<ExplicitWealth>(cfg.wealth.dist).values;
    }
    root["wealth"] = w;
  }

  root["output"] = {{"dir", cfg.output.dir},
                    {"sample_every", cfg.output.sample_every}};
  return root;
}

}  // namespace wealthnet
