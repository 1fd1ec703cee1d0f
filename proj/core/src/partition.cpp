#include "illusim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <string>

#include "illusim/error.hpp"
#include "illusim/rng.hpp"

namespace illusim {

void PartitionSpec::validate(int n) const {
    if (num_parts < 1) {
        throw ContractViolation("number of parts must be >= 1, got " +
                                std::to_string(num_parts));
    }
    if (num_parts > n) {
        throw ContractViolation("number of parts " + std::to_string(num_parts) +
                                " exceeds spin count " + std::to_string(n));
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ContractViolation("balance slack epsilon must be >= 0");
    }
    if (capacity_override) {
        if (*capacity_override < 1) {
            throw ContractViolation("capacity override must be >= 1");
        }
        if (*capacity_override * num_parts < n) {
            throw ContractViolation(
                "capacity override " + std::to_string(*capacity_override) +
                " cannot hold " + std::to_string(n) + " spins in " +
                std::to_string(num_parts) + " parts");
        }
    }
}

std::int64_t part_capacity(const PartitionSpec& spec, int n) {
    if (spec.capacity_override) return *spec.capacity_override;
    const double ideal = std::ceil(static_cast<double>(n) /
                                   static_cast<double>(spec.num_parts));
    return static_cast<std::int64_t>(
        std::floor((1.0 + spec.epsilon) * ideal + 1e-9));
}

double cut_weight(const IsingModel& model, const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) != model.size()) {
        throw ContractViolation("assignment length " +
                                std::to_string(assignment.size()) +
                                " does not match model size " +
                                std::to_string(model.size()));
    }
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] < 0) {
            throw ContractViolation("spin " + std::to_string(i) +
                                    " is unassigned");
        }
    }
    double cut = 0.0;
    for (const auto& c : model.couplings()) {
        if (assignment[static_cast<std::size_t>(c.i)] !=
            assignment[static_cast<std::size_t>(c.j)]) {
            cut += std::abs(c.weight);
        }
    }
    return cut;
}

WeightedGraph WeightedGraph::from_model(const IsingModel& model) {
    WeightedGraph g;
    g.n = model.size();
    g.node_weight.assign(static_cast<std::size_t>(g.n), 1);
    g.edges.reserve(model.couplings().size());
    for (const auto& c : model.couplings()) {
        g.edges.push_back({c.i, c.j, std::abs(c.weight)});
    }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge& a, const Edge& b) {
                  return std::pair{a.u, a.v} < std::pair{b.u, b.v};
              });
    g.rebuild_adjacency();
    return g;
}

void WeightedGraph::rebuild_adjacency() {
    adjacency.assign(static_cast<std::size_t>(n), {});
    for (const auto& e : edges) {
        adjacency[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.weight);
        adjacency[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.weight);
    }
    for (auto& terms : adjacency) {
        std::sort(terms.begin(), terms.end());
    }
}

std::int64_t WeightedGraph::total_weight() const {
    return std::accumulate(node_weight.begin(), node_weight.end(),
                           std::int64_t{0});
}

namespace {

double graph_cut(const WeightedGraph& g, const std::vector<int>& assignment) {
    double cut = 0.0;
    for (const auto& e : g.edges) {
        if (assignment[static_cast<std::size_t>(e.u)] !=
            assignment[static_cast<std::size_t>(e.v)]) {
            cut += e.weight;
        }
    }
    return cut;
}

/// One matching + contraction step; returns false when nothing matched.
bool coarsen_step(const WeightedGraph& g, std::int64_t max_merged_weight,
                  CoarseLevel& out) {
    std::vector<WeightedGraph::Edge> order = g.edges;
    std::stable_sort(order.begin(), order.end(),
                     [](const WeightedGraph::Edge& a,
                        const WeightedGraph::Edge& b) {
                         return a.weight > b.weight;
                     });
    std::vector<int> match(static_cast<std::size_t>(g.n), -1);
    bool any = false;
    for (const auto& e : order) {
        if (match[static_cast<std::size_t>(e.u)] >= 0 ||
            match[static_cast<std::size_t>(e.v)] >= 0) {
            continue;
        }
        if (g.node_weight[static_cast<std::size_t>(e.u)] +
                g.node_weight[static_cast<std::size_t>(e.v)] >
            max_merged_weight) {
            continue;
        }
        match[static_cast<std::size_t>(e.u)] = e.v;
        match[static_cast<std::size_t>(e.v)] = e.u;
        any = true;
    }
    if (!any) return false;

    out.coarse_of.assign(static_cast<std::size_t>(g.n), -1);
    int next_id = 0;
    for (int v = 0; v < g.n; ++v) {
        if (out.coarse_of[static_cast<std::size_t>(v)] >= 0) continue;
        out.coarse_of[static_cast<std::size_t>(v)] = next_id;
        const int partner = match[static_cast<std::size_t>(v)];
        if (partner >= 0) {
            out.coarse_of[static_cast<std::size_t>(partner)] = next_id;
        }
        ++next_id;
    }

    WeightedGraph& coarse = out.graph;
    coarse.n = next_id;
    coarse.node_weight.assign(static_cast<std::size_t>(next_id), 0);
    for (int v = 0; v < g.n; ++v) {
        coarse.node_weight[static_cast<std::size_t>(
            out.coarse_of[static_cast<std::size_t>(v)])] +=
            g.node_weight[static_cast<std::size_t>(v)];
    }
    std::map<std::pair<int, int>, double> merged;
    for (const auto& e : g.edges) {
        int cu = out.coarse_of[static_cast<std::size_t>(e.u)];
        int cv = out.coarse_of[static_cast<std::size_t>(e.v)];
        if (cu == cv) continue;
        if (cu > cv) std::swap(cu, cv);
        merged[{cu, cv}] += e.weight;
    }
    coarse.edges.reserve(merged.size());
    for (const auto& [key, w] : merged) {
        coarse.edges.push_back({key.first, key.second, w});
    }
    coarse.rebuild_adjacency();
    return true;
}

}  // namespace

std::vector<CoarseLevel> coarsen(const WeightedGraph& graph, int target_nodes,
                                 std::int64_t max_merged_weight) {
    std::vector<CoarseLevel> levels;
    const WeightedGraph* current = &graph;
    while (current->n > target_nodes) {
        CoarseLevel level;
        if (!coarsen_step(*current, max_merged_weight, level)) break;
        levels.push_back(std::move(level));
        current = &levels.back().graph;
    }
    return levels;
}

std::vector<CoarseLevel> coarsen(const IsingModel& model, int target_nodes) {
    return coarsen(WeightedGraph::from_model(model), target_nodes);
}

namespace {

class FmRefiner {
public:
    FmRefiner(const WeightedGraph& graph, std::vector<int>& assignment,
              std::vector<std::int64_t> caps)
        : graph_(graph),
          assignment_(assignment),
          caps_(std::move(caps)),
          num_parts_(static_cast<int>(caps_.size())) {
        connectivity_.assign(static_cast<std::size_t>(graph.n) *
                                 static_cast<std::size_t>(num_parts_),
                             0.0);
        part_weight_.assign(caps_.size(), 0);
        for (int v = 0; v < graph.n; ++v) {
            part_weight_[static_cast<std::size_t>(
                assignment[static_cast<std::size_t>(v)])] +=
                graph.node_weight[static_cast<std::size_t>(v)];
        }
        for (const auto& e : graph.edges) {
            conn(e.u, assignment[static_cast<std::size_t>(e.v)]) += e.weight;
            conn(e.v, assignment[static_cast<std::size_t>(e.u)]) += e.weight;
        }
        slack_ = 0;
        for (auto w : graph.node_weight) slack_ = std::max(slack_, w);
    }

    /// Runs passes until no improvement or the pass budget runs out;
    /// returns the exact final cut weight.
    double refine(int max_passes) {
        double cut = graph_cut(graph_, assignment_);
        for (int pass = 0; pass < max_passes; ++pass) {
            if (!run_pass(cut)) break;
        }
        return graph_cut(graph_, assignment_);
    }

private:
    struct Move {
        int node;
        int from;
        int to;
    };

    double& conn(int node, int part) {
        return connectivity_[static_cast<std::size_t>(node) *
                                 static_cast<std::size_t>(num_parts_) +
                             static_cast<std::size_t>(part)];
    }

    void apply(int node, int to) {
        const int from = assignment_[static_cast<std::size_t>(node)];
        assignment_[static_cast<std::size_t>(node)] = to;
        const std::int64_t w = graph_.node_weight[static_cast<std::size_t>(node)];
        part_weight_[static_cast<std::size_t>(from)] -= w;
        part_weight_[static_cast<std::size_t>(to)] += w;
        for (const auto& [nb, ew] :
             graph_.adjacency[static_cast<std::size_t>(node)]) {
            conn(nb, from) -= ew;
            conn(nb, to) += ew;
        }
    }

    bool within_caps() const {
        for (std::size_t p = 0; p < caps_.size(); ++p) {
            if (part_weight_[p] > caps_[p]) return false;
        }
        return true;
    }

    /// Single pass; each node moves at most once; the pass keeps the best
    /// prefix whose parts all satisfy the strict caps. Individual moves may
    /// overshoot a cap by at most one node while the pass is in flight.
    bool run_pass(double& cut) {
        const int n = graph_.n;
        std::vector<char> locked(static_cast<std::size_t>(n), 0);
        std::vector<Move> moves;
        double current = cut;
        double best_cut = cut;
        std::size_t best_prefix = 0;

        for (;;) {
            int best_node = -1;
            int best_target = -1;
            double best_gain = 0.0;
            for (int u = 0; u < n; ++u) {
                if (locked[static_cast<std::size_t>(u)]) continue;
                const int from = assignment_[static_cast<std::size_t>(u)];
                const std::int64_t wu =
                    graph_.node_weight[static_cast<std::size_t>(u)];
                for (int t = 0; t < num_parts_; ++t) {
                    if (t == from) continue;
                    if (part_weight_[static_cast<std::size_t>(t)] + wu >
                        caps_[static_cast<std::size_t>(t)] + slack_) {
                        continue;
                    }
                    const double gain = conn(u, t) - conn(u, from);
                    if (best_node < 0 || gain > best_gain) {
                        best_gain = gain;
                        best_node = u;
                        best_target = t;
                    }
                }
            }
            if (best_node < 0) break;

            const int from = assignment_[static_cast<std::size_t>(best_node)];
            apply(best_node, best_target);
            locked[static_cast<std::size_t>(best_node)] = 1;
            current -= best_gain;
            moves.push_back({best_node, from, best_target});

            if (within_caps() && current < best_cut) {
                best_cut = current;
                best_prefix = moves.size();
            }
        }

        for (std::size_t m = moves.size(); m > best_prefix; --m) {
            apply(moves[m - 1].node, moves[m - 1].from);
        }
        cut = best_cut;
        return best_prefix > 0;
    }

    const WeightedGraph& graph_;
    std::vector<int>& assignment_;
    std::vector<std::int64_t> caps_;
    int num_parts_;
    std::vector<double> connectivity_;
    std::vector<std::int64_t> part_weight_;
    std::int64_t slack_ = 0;
};

void check_feasible(const WeightedGraph& graph,
                    const std::vector<int>& assignment,
                    const std::vector<std::int64_t>& caps) {
    if (static_cast<int>(assignment.size()) != graph.n) {
        throw ContractViolation("assignment length does not match graph size");
    }
    std::vector<std::int64_t> weights(caps.size(), 0);
    for (int v = 0; v < graph.n; ++v) {
        const int p = assignment[static_cast<std::size_t>(v)];
        if (p < 0 || p >= static_cast<int>(caps.size())) {
            throw ContractViolation("node " + std::to_string(v) +
                                    " assigned to invalid part " +
                                    std::to_string(p));
        }
        weights[static_cast<std::size_t>(p)] +=
            graph.node_weight[static_cast<std::size_t>(v)];
    }
    for (std::size_t p = 0; p < caps.size(); ++p) {
        if (weights[p] > caps[p]) {
            throw ContractViolation("infeasible assignment: part " +
                                    std::to_string(p) + " holds weight " +
                                    std::to_string(weights[p]) +
                                    " above cap " + std::to_string(caps[p]));
        }
    }
}

double fm_refine_caps(const WeightedGraph& graph, std::vector<int>& assignment,
                      const std::vector<std::int64_t>& caps, int max_passes) {
    check_feasible(graph, assignment, caps);
    FmRefiner refiner(graph, assignment, caps);
    return refiner.refine(max_passes);
}

/// Grows num_parts regions by BFS from the given seeds. Parts fill in
/// order of lowest weight/target ratio; a part with a dead frontier pulls
/// the heaviest unassigned node that fits. Deterministic.
std::vector<int> grow_initial(const WeightedGraph& g,
                              const std::vector<int>& seeds,
                              const std::vector<std::int64_t>& caps,
                              const std::vector<double>& targets) {
    const int num_parts = static_cast<int>(seeds.size());
    std::vector<int> assignment(static_cast<std::size_t>(g.n), -1);
    std::vector<std::int64_t> weight(static_cast<std::size_t>(num_parts), 0);
    std::vector<std::deque<int>> frontier(static_cast<std::size_t>(num_parts));
    std::vector<char> saturated(static_cast<std::size_t>(num_parts), 0);
    int assigned = 0;

    const auto place = [&](int node, int part) {
        assignment[static_cast<std::size_t>(node)] = part;
        weight[static_cast<std::size_t>(part)] +=
            g.node_weight[static_cast<std::size_t>(node)];
        ++assigned;
        for (const auto& edge : g.adjacency[static_cast<std::size_t>(node)]) {
            if (assignment[static_cast<std::size_t>(edge.first)] < 0) {
                frontier[static_cast<std::size_t>(part)].push_back(edge.first);
            }
        }
    };

    for (int p = 0; p < num_parts; ++p) {
        if (assignment[static_cast<std::size_t>(seeds[p])] < 0) {
            place(seeds[static_cast<std::size_t>(p)], p);
        }
    }

    while (assigned < g.n) {
        int part = -1;
        double best_fill = 0.0;
        for (int p = 0; p < num_parts; ++p) {
            if (saturated[static_cast<std::size_t>(p)]) continue;
            const double fill = static_cast<double>(
                                    weight[static_cast<std::size_t>(p)]) /
                                targets[static_cast<std::size_t>(p)];
            if (part < 0 || fill < best_fill) {
                best_fill = fill;
                part = p;
            }
        }
        if (part < 0) break;

        auto& queue = frontier[static_cast<std::size_t>(part)];
        int chosen = -1;
        while (!queue.empty()) {
            const int cand = queue.front();
            queue.pop_front();
            if (assignment[static_cast<std::size_t>(cand)] >= 0) continue;
            if (weight[static_cast<std::size_t>(part)] +
                    g.node_weight[static_cast<std::size_t>(cand)] <=
                caps[static_cast<std::size_t>(part)]) {
                chosen = cand;
            } else {
                queue.push_back(cand);  // may fit in another part later
            }
            break;
        }
        if (chosen < 0 && queue.empty()) {
            // Dead frontier: pull the heaviest unassigned node that fits.
            std::int64_t best_w = -1;
            for (int v = 0; v < g.n; ++v) {
                if (assignment[static_cast<std::size_t>(v)] >= 0) continue;
                const std::int64_t w =
                    g.node_weight[static_cast<std::size_t>(v)];
                if (weight[static_cast<std::size_t>(part)] + w >
                    caps[static_cast<std::size_t>(part)]) {
                    continue;
                }
                if (w > best_w) {
                    best_w = w;
                    chosen = v;
                }
            }
        }
        if (chosen >= 0) {
            place(chosen, part);
        } else {
            saturated[static_cast<std::size_t>(part)] = 1;
        }
    }

    // Anything left goes to the lightest part that can take it.
    for (int v = 0; v < g.n; ++v) {
        if (assignment[static_cast<std::size_t>(v)] >= 0) continue;
        int best_part = -1;
        for (int p = 0; p < num_parts; ++p) {
            if (weight[static_cast<std::size_t>(p)] +
                    g.node_weight[static_cast<std::size_t>(v)] >
                caps[static_cast<std::size_t>(p)]) {
                continue;
            }
            if (best_part < 0 || weight[static_cast<std::size_t>(p)] <
                                     weight[static_cast<std::size_t>(best_part)]) {
                best_part = p;
            }
        }
        if (best_part < 0) {
            throw ContractViolation(
                "initial partition could not satisfy part capacities");
        }
        place(v, best_part);
    }
    return assignment;
}

/// Seed vertices for one restart: restart 0 takes the heaviest vertices
/// (ties by index); later restarts draw distinct vertices from the
/// partitioner seed.
std::vector<int> pick_seeds(const WeightedGraph& g, int num_parts,
                            std::uint64_t seed, std::uint64_t stream,
                            int restart) {
    std::vector<int> seeds;
    if (restart == 0) {
        std::vector<int> order(static_cast<std::size_t>(g.n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return g.node_weight[static_cast<std::size_t>(a)] >
                   g.node_weight[static_cast<std::size_t>(b)];
        });
        seeds.assign(order.begin(), order.begin() + num_parts);
        return seeds;
    }
    std::uint64_t counter =
        static_cast<std::uint64_t>(restart) * 1024;  // distinct draw block
    while (static_cast<int>(seeds.size()) < num_parts) {
        const int v = static_cast<int>(uniform_draw(seed, stream, counter++) *
                                       static_cast<double>(g.n));
        if (std::find(seeds.begin(), seeds.end(), v) == seeds.end()) {
            seeds.push_back(std::min(v, g.n - 1));
        }
    }
    return seeds;
}

constexpr int kCoarsenTargetFloor = 32;
constexpr int kInitialRestarts = 4;
constexpr int kDefaultFmPasses = 10;

/// Multilevel 2-way split of `graph` into side weights <= caps[0]/caps[1].
std::vector<int> bisect(const WeightedGraph& graph,
                        const std::vector<std::int64_t>& caps,
                        const std::vector<double>& targets, std::uint64_t seed,
                        std::uint64_t stream) {
    const std::int64_t max_merged =
        std::max<std::int64_t>(1, std::min(caps[0], caps[1]) / 2);
    const auto levels = coarsen(graph, kCoarsenTargetFloor, max_merged);
    const WeightedGraph& coarsest = levels.empty() ? graph : levels.back().graph;

    std::vector<int> best;
    double best_cut = 0.0;
    for (int restart = 0; restart < kInitialRestarts; ++restart) {
        const auto seeds = pick_seeds(coarsest, 2, seed, stream, restart);
        std::vector<int> candidate;
        try {
            candidate = grow_initial(coarsest, seeds, caps, targets);
        } catch (const ContractViolation&) {
            continue;  // this restart could not fit; try another seeding
        }
        const double cut =
            fm_refine_caps(coarsest, candidate, caps, kDefaultFmPasses);
        if (best.empty() || cut < best_cut) {
            best = std::move(candidate);
            best_cut = cut;
        }
    }
    if (best.empty()) {
        throw ContractViolation("no feasible bisection found");
    }

    // Uncoarsen, refining at every level.
    for (std::size_t l = levels.size(); l > 0; --l) {
        const auto& level = levels[l - 1];
        const WeightedGraph& fine =
            l >= 2 ? levels[l - 2].graph : graph;
        std::vector<int> projected(static_cast<std::size_t>(fine.n));
        for (int v = 0; v < fine.n; ++v) {
            projected[static_cast<std::size_t>(v)] =
                best[static_cast<std::size_t>(
                    level.coarse_of[static_cast<std::size_t>(v)])];
        }
        fm_refine_caps(fine, projected, caps, kDefaultFmPasses);
        best = std::move(projected);
    }
    return best;
}

WeightedGraph induced_subgraph(const WeightedGraph& g,
                               const std::vector<int>& nodes,
                               std::vector<int>& local_of) {
    WeightedGraph sub;
    sub.n = static_cast<int>(nodes.size());
    sub.node_weight.resize(nodes.size());
    local_of.assign(static_cast<std::size_t>(g.n), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        local_of[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
        sub.node_weight[i] = g.node_weight[static_cast<std::size_t>(nodes[i])];
    }
    for (const auto& e : g.edges) {
        const int lu = local_of[static_cast<std::size_t>(e.u)];
        const int lv = local_of[static_cast<std::size_t>(e.v)];
        if (lu >= 0 && lv >= 0) {
            sub.edges.push_back({std::min(lu, lv), std::max(lu, lv), e.weight});
        }
    }
    std::sort(sub.edges.begin(), sub.edges.end(),
              [](const WeightedGraph::Edge& a, const WeightedGraph::Edge& b) {
                  return std::pair{a.u, a.v} < std::pair{b.u, b.v};
              });
    sub.rebuild_adjacency();
    return sub;
}

/// Recursive bisection: splits `nodes` of `g` into k consecutive part ids
/// starting at part_base, writing into `assignment` (global node ids).
void partition_recursive(const WeightedGraph& g, const std::vector<int>& nodes,
                         int k, int part_base, std::int64_t cap,
                         std::uint64_t seed, std::uint64_t stream,
                         std::vector<int>& assignment) {
    if (k == 1) {
        for (int v : nodes) {
            assignment[static_cast<std::size_t>(v)] = part_base;
        }
        return;
    }
    const int k0 = (k + 1) / 2;
    const int k1 = k - k0;
    std::vector<int> local_of;
    const WeightedGraph sub = induced_subgraph(g, nodes, local_of);
    const auto total = sub.total_weight();
    // Each side must keep at least as many spins as parts it still owes,
    // so the opposite cap shrinks accordingly (matters for loose epsilon).
    const std::vector<std::int64_t> caps = {
        std::min(cap * k0, total - k1), std::min(cap * k1, total - k0)};
    const std::vector<double> targets = {
        std::max(1.0, static_cast<double>(total) * k0 / static_cast<double>(k)),
        std::max(1.0, static_cast<double>(total) * k1 / static_cast<double>(k))};
    const auto side = bisect(sub, caps, targets, seed, stream);

    std::vector<int> side0;
    std::vector<int> side1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        (side[i] == 0 ? side0 : side1).push_back(nodes[i]);
    }
    partition_recursive(g, side0, k0, part_base, cap, seed, stream * 2 + 1,
                        assignment);
    partition_recursive(g, side1, k1, part_base + k0, cap, seed,
                        stream * 2 + 2, assignment);
}

}  // namespace

double fm_refine(const WeightedGraph& graph, std::vector<int>& assignment,
                 int num_parts, std::int64_t cap, int max_passes) {
    if (num_parts < 1) {
        throw ContractViolation("number of parts must be >= 1");
    }
    const std::vector<std::int64_t> caps(static_cast<std::size_t>(num_parts),
                                         cap);
    return fm_refine_caps(graph, assignment, caps, max_passes);
}

double fm_refine(const IsingModel& model, std::vector<int>& assignment,
                 const PartitionSpec& spec, int max_passes) {
    spec.validate(model.size());
    const auto graph = WeightedGraph::from_model(model);
    return fm_refine(graph, assignment, spec.num_parts,
                     part_capacity(spec, model.size()), max_passes);
}

PartitionResult partition(const IsingModel& model, const PartitionSpec& spec) {
    const int n = model.size();
    spec.validate(n);
    const std::int64_t cap = part_capacity(spec, n);

    PartitionResult result;
    result.assignment.assign(static_cast<std::size_t>(n), -1);
    if (spec.num_parts == 1) {
        std::fill(result.assignment.begin(), result.assignment.end(), 0);
    } else {
        const auto graph = WeightedGraph::from_model(model);
        std::vector<int> nodes(static_cast<std::size_t>(n));
        std::iota(nodes.begin(), nodes.end(), 0);
        partition_recursive(graph, nodes, spec.num_parts, 0, cap, spec.seed,
                            1, result.assignment);
    }

    result.part_sizes.assign(static_cast<std::size_t>(spec.num_parts), 0);
    for (int p : result.assignment) {
        ++result.part_sizes[static_cast<std::size_t>(p)];
    }
    result.cut_weight = cut_weight(model, result.assignment);
    return result;
}

PartitionResult brute_force_min_cut(const IsingModel& model,
                                    const PartitionSpec& spec) {
    const int n = model.size();
    spec.validate(n);
    if (spec.num_parts != 2) {
        throw CapacityError("brute_force_min_cut handles k == 2 only, got " +
                            std::to_string(spec.num_parts));
    }
    if (n > kBruteForcePartitionMaxSpins) {
        throw CapacityError("brute_force_min_cut supports at most " +
                            std::to_string(kBruteForcePartitionMaxSpins) +
                            " spins, got " + std::to_string(n));
    }
    const std::int64_t cap = part_capacity(spec, n);
    const auto& couplings = model.couplings();

    // Spin 0 stays in part 0; enumerating the remaining bits in ascending
    // mask order visits assignments in lexicographic order, so the first
    // optimum seen is the lexicographically smallest.
    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    std::vector<int> best_assignment;
    double best_cut = 0.0;
    const std::uint32_t limit = 1u << (n - 1);
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        int size1 = 0;
        for (int i = 1; i < n; ++i) {
            const int bit =
                (mask >> (n - 1 - i)) & 1u;  // spin 1 is the highest bit
            assignment[static_cast<std::size_t>(i)] = bit;
            size1 += bit;
        }
        const int size0 = n - size1;
        if (size0 > cap || size1 > cap) continue;
        double cut = 0.0;
        for (const auto& c : couplings) {
            if (assignment[static_cast<std::size_t>(c.i)] !=
                assignment[static_cast<std::size_t>(c.j)]) {
                cut += std::abs(c.weight);
            }
        }
        if (best_assignment.empty() || cut < best_cut) {
            best_cut = cut;
            best_assignment = assignment;
        }
    }
    if (best_assignment.empty()) {
        throw ContractViolation("no feasible bisection exists for this spec");
    }

    PartitionResult result;
    result.assignment = std::move(best_assignment);
    result.cut_weight = best_cut;
    result.part_sizes.assign(2, 0);
    for (int p : result.assignment) {
        ++result.part_sizes[static_cast<std::size_t>(p)];
    }
    return result;
}

}  // namespace illusim
