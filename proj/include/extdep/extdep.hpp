#pragma once

// Umbrella header: classification of extremal dependence for pairs of
// heavy-tailed nonnegative series, plus the batch pipeline over return data.

#include "extdep/bootstrap.hpp"
#include "extdep/classifier.hpp"
#include "extdep/core.hpp"
#include "extdep/heatmap.hpp"
#include "extdep/matrix.hpp"
#include "extdep/parallel.hpp"
#include "extdep/returns.hpp"
#include "extdep/rng.hpp"
#include "extdep/special.hpp"
#include "extdep/statistics.hpp"
#include "extdep/synth.hpp"
#include "extdep/threshold.hpp"
