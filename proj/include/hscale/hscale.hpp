#pragma once

// Umbrella header: the whole library in one include.

#include "hscale/errors.hpp"
#include "hscale/gl_field.hpp"
#include "hscale/hash.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/parallel.hpp"
#include "hscale/picard.hpp"
#include "hscale/rng.hpp"
#include "hscale/scale.hpp"
#include "hscale/stats.hpp"
#include "hscale/table.hpp"
#include "hscale/torus.hpp"
#include "hscale/trajectory.hpp"
#include "hscale/wiener.hpp"
#include "hscale/spins/configuration.hpp"
#include "hscale/spins/constants.hpp"
#include "hscale/spins/dynamics.hpp"
#include "hscale/spins/families.hpp"
#include "hscale/spins/graph.hpp"
#include "hscale/experiments/config.hpp"
#include "hscale/experiments/emit.hpp"
#include "hscale/experiments/runner.hpp"
