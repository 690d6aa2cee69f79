#pragma once

// Umbrella header: predatory-trader wealth dynamics on lattices and
// augmented networks, with survival statistics and experiment drivers.

#include "wealthnet/config.hpp"
#include "wealthnet/dynamics.hpp"
#include "wealthnet/errors.hpp"
#include "wealthnet/experiments.hpp"
#include "wealthnet/graph.hpp"
#include "wealthnet/histogram.hpp"
#include "wealthnet/io.hpp"
#include "wealthnet/linalg.hpp"
#include "wealthnet/model.hpp"
#include "wealthnet/parallel.hpp"
#include "wealthnet/rng.hpp"
#include "wealthnet/sampling.hpp"
#include "wealthnet/state.hpp"
#include "wealthnet/stats.hpp"
#include "wealthnet/version.hpp"
