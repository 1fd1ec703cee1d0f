#pragma once

#include <cstdint>

#include "illusim/model.hpp"

namespace illusim {

/// Seeded problem generators for benchmarks and tests. All draws go
/// through the counter-based generator, so an instance is a pure function
/// of its arguments.

/// rows x cols nearest-neighbor grid, row-major spin ids.
IsingModel make_grid_model(int rows, int cols, double coupling = 1.0,
                           double bias = 0.0);

/// Path 0-1-...-n-1 with uniform coupling.
IsingModel make_chain_model(int n, double coupling = 1.0);

struct RandomModelOptions {
    double density = 0.3;         // independent edge probability
    double coupling_scale = 1.0;  // J ~ scale * N(0,1)
    double bias_scale = 0.0;      // h ~ scale * N(0,1)
    bool absolute_couplings = false;
};

/// Erdos-Renyi coupling graph with Gaussian weights.
IsingModel make_random_model(int n, std::uint64_t seed,
                             const RandomModelOptions& options = {});

}  // namespace illusim
