#pragma once

#include "soc/betweenness.hpp"
#include "soc/errors.hpp"
#include "soc/generators.hpp"
#include "soc/graph.hpp"
#include "soc/io.hpp"
#include "soc/katz.hpp"
#include "soc/rwbc.hpp"
#include "soc/sampling.hpp"
#include "soc/scores.hpp"
#include "soc/simulate.hpp"
#include "soc/spectral.hpp"
#include "soc/state_space.hpp"
#include "soc/stats.hpp"
#include "soc/testkit.hpp"
