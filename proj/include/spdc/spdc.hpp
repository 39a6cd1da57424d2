// Umbrella header.

#pragma once

#include "spdc/analytics.hpp"
#include "spdc/common.hpp"
#include "spdc/config.hpp"
#include "spdc/csv.hpp"
#include "spdc/curves.hpp"
#include "spdc/errors.hpp"
#include "spdc/fibre.hpp"
#include "spdc/grid.hpp"
#include "spdc/jones.hpp"
#include "spdc/montecarlo.hpp"
#include "spdc/optics.hpp"
#include "spdc/rng.hpp"
#include "spdc/state.hpp"
