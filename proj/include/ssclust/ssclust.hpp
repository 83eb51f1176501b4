#pragma once

// Umbrella header for the whole library.

#include "ssclust/analysis.hpp"
#include "ssclust/dataset.hpp"
#include "ssclust/errors.hpp"
#include "ssclust/gaussian.hpp"
#include "ssclust/init.hpp"
#include "ssclust/io.hpp"
#include "ssclust/metrics.hpp"
#include "ssclust/rng.hpp"
#include "ssclust/select.hpp"
#include "ssclust/sim.hpp"
#include "ssclust/ssem.hpp"
