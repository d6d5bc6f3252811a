#pragma once

// Convenience umbrella: the whole library.

#include "hvmax/data.hpp"
#include "hvmax/experiment.hpp"
#include "hvmax/gradcheck.hpp"
#include "hvmax/net.hpp"
#include "hvmax/optim.hpp"
#include "hvmax/pareto.hpp"
#include "hvmax/record.hpp"
#include "hvmax/rng.hpp"
#include "hvmax/scalarize.hpp"
#include "hvmax/stats.hpp"
