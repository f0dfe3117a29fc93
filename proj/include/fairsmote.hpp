#pragma once

// Convenience umbrella for the whole library.

#include "fairsmote/config.hpp"
#include "fairsmote/csv.hpp"
#include "fairsmote/dataset.hpp"
#include "fairsmote/errors.hpp"
#include "fairsmote/harness.hpp"
#include "fairsmote/logistic.hpp"
#include "fairsmote/metrics.hpp"
#include "fairsmote/neighbors.hpp"
#include "fairsmote/rng.hpp"
#include "fairsmote/sampler.hpp"
#include "fairsmote/scott_knott.hpp"
#include "fairsmote/situation.hpp"
