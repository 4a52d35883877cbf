#pragma once

// Umbrella header.

#include "edgesample/chebyshev.hpp"
#include "edgesample/error.hpp"
#include "edgesample/experiment.hpp"
#include "edgesample/generators.hpp"
#include "edgesample/graph.hpp"
#include "edgesample/io.hpp"
#include "edgesample/line_graph.hpp"
#include "edgesample/localization.hpp"
#include "edgesample/metrics.hpp"
#include "edgesample/random.hpp"
#include "edgesample/reconstruction.hpp"
#include "edgesample/samplers.hpp"
#include "edgesample/spectral.hpp"
