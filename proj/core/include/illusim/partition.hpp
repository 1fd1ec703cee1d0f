#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "illusim/model.hpp"

namespace illusim {

/// Balanced k-way split request. The per-part cap is
/// floor((1+epsilon) * ceil(n/k)) spins unless capacity_override is set.
struct PartitionSpec {
    int num_parts = 2;
    double epsilon = 0.05;
    std::optional<std::int64_t> capacity_override;
    std::uint64_t seed = 0;

    void validate(int n) const;
};

std::int64_t part_capacity(const PartitionSpec& spec, int n);

struct PartitionResult {
    std::vector<int> assignment;  // spin -> part in [0, k)
    double cut_weight = 0.0;      // sum of |J| over cut couplings
    std::vector<std::int64_t> part_sizes;
};

/// Sum of |J_ij| over couplings whose endpoints live in different parts.
/// Both signs cost a boundary message, hence the absolute value.
double cut_weight(const IsingModel& model, const std::vector<int>& assignment);

/// The |J|-weighted graph the partitioner works on. Node weights count
/// the original spins folded into a node.
struct WeightedGraph {
    struct Edge {
        int u;
        int v;
        double weight;
    };

    int n = 0;
    std::vector<std::int64_t> node_weight;
    std::vector<Edge> edges;  // u < v, unique pairs
    std::vector<std::vector<std::pair<int, double>>> adjacency;

    static WeightedGraph from_model(const IsingModel& model);
    void rebuild_adjacency();
    std::int64_t total_weight() const;
};

/// One coarsening step: the coarser graph plus the fine-to-coarse map.
struct CoarseLevel {
    WeightedGraph graph;
    std::vector<int> coarse_of;  // finer node -> coarse node
};

/// Repeated heavy-edge matching (greedy over edges in descending weight,
/// ties by lowest endpoints) until the graph has at most target_nodes
/// nodes or nothing matches. Matches whose merged node weight would
/// exceed max_merged_weight are skipped.
std::vector<CoarseLevel> coarsen(
    const WeightedGraph& graph, int target_nodes,
    std::int64_t max_merged_weight = std::numeric_limits<std::int64_t>::max());

std::vector<CoarseLevel> coarsen(const IsingModel& model,
                                 int target_nodes = 32);

/// Pass-based single-node refinement (Fiduccia-Mattheyses style): each
/// pass moves every node at most once by best gain, lets the part weight
/// overshoot the cap by at most one node transiently, and rolls back to
/// the best prefix that satisfies the cap. Never increases the cut,
/// never returns an over-cap assignment. Returns the final cut weight.
double fm_refine(const WeightedGraph& graph, std::vector<int>& assignment,
                 int num_parts, std::int64_t cap, int max_passes = 10);

/// fm_refine on a model with spec-derived caps. Throws ContractViolation
/// if the input assignment is infeasible.
double fm_refine(const IsingModel& model, std::vector<int>& assignment,
                 const PartitionSpec& spec, int max_passes = 10);

/// Multilevel pipeline: coarsen, grow a balanced initial partition on the
/// coarsest graph (BFS regions from seed vertices, heaviest first), then
/// uncoarsen with refinement at each level. k > 2 is handled by recursive
/// bisection. Deterministic given spec.seed.
PartitionResult partition(const IsingModel& model, const PartitionSpec& spec);

/// Exhaustive balanced bisection oracle; n <= 14 and k == 2 only.
/// Optimum ties are broken by the lexicographically smallest assignment.
inline constexpr int kBruteForcePartitionMaxSpins = 14;
PartitionResult brute_force_min_cut(const IsingModel& model,
                                    const PartitionSpec& spec);

}  // namespace illusim
