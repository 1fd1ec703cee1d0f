#include "illusim/instances.hpp"

#include <cmath>
#include <numbers>

#include "illusim/rng.hpp"

namespace illusim {

IsingModel make_grid_model(int rows, int cols, double coupling, double bias) {
    IsingModel model(rows * cols);
    const auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) model.add_coupling(id(r, c), id(r, c + 1), coupling);
            if (r + 1 < rows) model.add_coupling(id(r, c), id(r + 1, c), coupling);
            if (bias != 0.0) model.set_bias(id(r, c), bias);
        }
    }
    return model;
}

IsingModel make_chain_model(int n, double coupling) {
    IsingModel model(n);
    for (int i = 0; i + 1 < n; ++i) {
        model.add_coupling(i, i + 1, coupling);
    }
    return model;
}

namespace {

double standard_normal(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t counter) {
    // Box-Muller; 1-u keeps the log argument in (0,1].
    const double u1 = 1.0 - uniform_draw(seed, stream, counter);
    const double u2 = uniform_draw(seed, stream, counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

IsingModel make_random_model(int n, std::uint64_t seed,
                             const RandomModelOptions& options) {
    IsingModel model(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto pair_stream =
                static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
                static_cast<std::uint64_t>(j);
            if (uniform_draw(seed, pair_stream, 0) >= options.density) continue;
            double weight =
                options.coupling_scale * standard_normal(seed, pair_stream, 1);
            if (options.absolute_couplings) weight = std::abs(weight);
            model.add_coupling(i, j, weight);
        }
    }
    if (options.bias_scale != 0.0) {
        const auto bias_base = static_cast<std::uint64_t>(n) *
                               static_cast<std::uint64_t>(n);
        for (int i = 0; i < n; ++i) {
            model.set_bias(i, options.bias_scale *
                                  standard_normal(seed, bias_base + i, 0));
        }
    }
    return model;
}

}  // namespace illusim
