// Umbrella header.

#ifndef METRICNET_METRICNET_HPP
#define METRICNET_METRICNET_HPP

#include "metricnet/graph.hpp"
#include "metricnet/io.hpp"
#include "metricnet/random.hpp"
#include "metricnet/projection.hpp"
#include "metricnet/vptree.hpp"
#include "metricnet/optim.hpp"
#include "metricnet/experiments.hpp"

#define METRICNET_VERSION "1.0.0"

#endif  // METRICNET_METRICNET_HPP
