#include "illusim/coloring.hpp"

#include <algorithm>
#include <numeric>

namespace illusim {

Coloring greedy_coloring(const IsingModel& model) {
    const int n = model.size();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return model.degree(a) > model.degree(b);
    });

    Coloring coloring;
    coloring.color.assign(static_cast<std::size_t>(n), -1);
    std::vector<char> used;
    for (int v : order) {
        used.assign(static_cast<std::size_t>(model.degree(v)) + 1, 0);
        for (const auto& term : model.neighbors(v)) {
            const int c = coloring.color[static_cast<std::size_t>(term.neighbor)];
            if (c >= 0 && c < static_cast<int>(used.size())) used[c] = 1;
        }
        int c = 0;
        while (used[static_cast<std::size_t>(c)]) ++c;
        coloring.color[static_cast<std::size_t>(v)] = c;
        coloring.num_colors = std::max(coloring.num_colors, c + 1);
    }
    return coloring;
}

bool is_proper(const IsingModel& model, const Coloring& coloring) {
    if (static_cast<int>(coloring.color.size()) != model.size()) return false;
    for (int c : coloring.color) {
        if (c < 0 || c >= coloring.num_colors) return false;
    }
    for (const auto& c : model.couplings()) {
        if (coloring.color[static_cast<std::size_t>(c.i)] ==
            coloring.color[static_cast<std::size_t>(c.j)]) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> color_classes(const Coloring& coloring) {
    std::vector<std::vector<int>> classes(
        static_cast<std::size_t>(coloring.num_colors));
    for (std::size_t i = 0; i < coloring.color.size(); ++i) {
        classes[static_cast<std::size_t>(coloring.color[i])].push_back(
            static_cast<int>(i));
    }
    return classes;
}

}  // namespace illusim
