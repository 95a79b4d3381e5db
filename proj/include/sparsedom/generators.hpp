#pragma once

#include <cstdint>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/// Unit spike at the domain center.
GridFunction gen_spike(int dim, int extent, double amplitude = 1.0);

/// Random nonnegative values on a `fill` fraction of the cells of the central
/// half-box [n/4, 3n/4)^d; deterministic in the seed.
GridFunction gen_random(int dim, int extent, std::uint64_t seed, double fill = 0.1);

/// Smooth gaussian bump centered in the domain, width a fraction of n.
GridFunction gen_bump(int dim, int extent, double width_frac = 0.125);

}  // namespace sparsedom
