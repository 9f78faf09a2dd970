#pragma once

// Umbrella header for the IoT cyber-risk quantification engine.

#include "iotmm/assessment.hpp"
#include "iotmm/counter_rng.hpp"
#include "iotmm/errors.hpp"
#include "iotmm/format.hpp"
#include "iotmm/inventory.hpp"
#include "iotmm/micromort.hpp"
#include "iotmm/scenario.hpp"
#include "iotmm/valuation.hpp"
#include "iotmm/var_engine.hpp"
#include "iotmm/version.hpp"
#include "iotmm/vertex_probability.hpp"
