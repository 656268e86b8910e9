#pragma once

// Umbrella header.

#include "accumulator.hpp"
#include "analytics.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "distributions.hpp"
#include "model.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "propagation.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "runs.hpp"
#include "statistics.hpp"
#include "su2.hpp"
