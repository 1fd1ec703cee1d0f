#pragma once

#include <vector>

#include "illusim/model.hpp"

namespace illusim {

/// Proper coloring of the coupling graph: adjacent spins never share a
/// color, so all spins of one color can be resampled together.
struct Coloring {
    std::vector<int> color;  // per spin
    int num_colors = 0;
};

/// Largest-degree-first greedy coloring, ties broken by lowest index.
/// Uses at most max_degree + 1 colors; a 2D grid gets the 2-color
/// checkerboard.
Coloring greedy_coloring(const IsingModel& model);

bool is_proper(const IsingModel& model, const Coloring& coloring);

/// Spins grouped by color, ascending ids within each class.
std::vector<std::vector<int>> color_classes(const Coloring& coloring);

}  // namespace illusim
