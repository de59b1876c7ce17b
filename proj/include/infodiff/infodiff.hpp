#ifndef INFODIFF_INFODIFF_HPP
#define INFODIFF_INFODIFF_HPP

#include "infodiff/centrality.hpp"
#include "infodiff/diffusion.hpp"
#include "infodiff/errors.hpp"
#include "infodiff/generators.hpp"
#include "infodiff/graph.hpp"
#include "infodiff/harness.hpp"
#include "infodiff/intervention.hpp"
#include "infodiff/rng.hpp"
#include "infodiff/stats.hpp"

#endif  // INFODIFF_INFODIFF_HPP
