#pragma once

#include "liss/grid.hpp"
#include "liss/random.hpp"

namespace liss {

/// Random smooth field: Gaussian combination of the first `modes` Dirichlet
/// eigenmodes with 1/m amplitude falloff. Unnormalized.
StateVector random_smooth_state(const Grid& g, Rng& rng, int modes = 8);

/// Rescales to an exact discrete L2 norm (zero target gives the zero state).
StateVector scaled_to_norm(StateVector y, double target);

}  // namespace liss
