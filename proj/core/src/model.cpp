#include "illusim/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "illusim/error.hpp"

namespace illusim {

IsingModel::IsingModel(int n) : n_(n) {
    if (n <= 0) {
        throw ContractViolation("spin count must be positive, got " +
                                std::to_string(n));
    }
    biases_.assign(static_cast<std::size_t>(n), 0.0);
    adjacency_.resize(static_cast<std::size_t>(n));
}

void IsingModel::check_index(int i) const {
    if (i < 0 || i >= n_) {
        throw ContractViolation("spin index " + std::to_string(i) +
                                " out of range [0, " + std::to_string(n_) +
                                ")");
    }
}

void IsingModel::set_bias(int i, double value) {
    check_index(i);
    if (!std::isfinite(value)) {
        throw ContractViolation("bias h_" + std::to_string(i) +
                                " must be finite");
    }
    biases_[static_cast<std::size_t>(i)] = value;
}

void IsingModel::add_coupling(int i, int j, double weight) {
    check_index(i);
    check_index(j);
    if (i == j) {
        throw ContractViolation("self-coupling (" + std::to_string(i) + "," +
                                std::to_string(j) + ") not allowed");
    }
    if (!std::isfinite(weight)) {
        throw ContractViolation("coupling J_(" + std::to_string(i) + "," +
                                std::to_string(j) + ") must be finite");
    }
    if (i > j) std::swap(i, j);
    for (const auto& term : adjacency_[static_cast<std::size_t>(i)]) {
        if (term.neighbor == j) {
            throw ContractViolation("duplicate coupling (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
        }
    }
    couplings_.push_back({i, j, weight});
    adjacency_[static_cast<std::size_t>(i)].push_back({j, weight});
    adjacency_[static_cast<std::size_t>(j)].push_back({i, weight});
}

double IsingModel::bias(int i) const {
    check_index(i);
    return biases_[static_cast<std::size_t>(i)];
}

double IsingModel::coupling(int i, int j) const {
    check_index(i);
    check_index(j);
    for (const auto& term : adjacency_[static_cast<std::size_t>(i)]) {
        if (term.neighbor == j) return term.weight;
    }
    return 0.0;
}

const std::vector<CouplingTerm>& IsingModel::neighbors(int i) const {
    check_index(i);
    return adjacency_[static_cast<std::size_t>(i)];
}

int IsingModel::degree(int i) const {
    check_index(i);
    return static_cast<int>(adjacency_[static_cast<std::size_t>(i)].size());
}

int IsingModel::max_degree() const {
    int best = 0;
    for (const auto& terms : adjacency_) {
        best = std::max(best, static_cast<int>(terms.size()));
    }
    return best;
}

bool IsingModel::operator==(const IsingModel& other) const {
    if (n_ != other.n_ || biases_ != other.biases_) return false;
    auto sorted = [](std::vector<Coupling> cs) {
        std::sort(cs.begin(), cs.end(), [](const Coupling& a, const Coupling& b) {
            return std::pair{a.i, a.j} < std::pair{b.i, b.j};
        });
        return cs;
    };
    const auto lhs = sorted(couplings_);
    const auto rhs = sorted(other.couplings_);
    if (lhs.size() != rhs.size()) return false;
    for (std::size_t e = 0; e < lhs.size(); ++e) {
        if (lhs[e].i != rhs[e].i || lhs[e].j != rhs[e].j ||
            lhs[e].weight != rhs[e].weight) {
            return false;
        }
    }
    return true;
}

void check_state(const IsingModel& model, const SpinState& state) {
    if (static_cast<int>(state.size()) != model.size()) {
        throw ContractViolation(
            "state length " + std::to_string(state.size()) +
            " does not match model size " + std::to_string(model.size()));
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] != 1 && state[i] != -1) {
            throw ContractViolation("spin " + std::to_string(i) +
                                    " is not +-1");
        }
    }
}

double energy(const IsingModel& model, const SpinState& state) {
    if (static_cast<int>(state.size()) != model.size()) {
        throw ContractViolation(
            "state length " + std::to_string(state.size()) +
            " does not match model size " + std::to_string(model.size()));
    }
    double e = 0.0;
    for (const auto& c : model.couplings()) {
        e -= c.weight * state[static_cast<std::size_t>(c.i)] *
             state[static_cast<std::size_t>(c.j)];
    }
    const auto& h = model.biases();
    for (std::size_t i = 0; i < h.size(); ++i) {
        e -= h[i] * state[i];
    }
    return e;
}

double local_field(const IsingModel& model, const SpinState& state, int i) {
    if (static_cast<int>(state.size()) != model.size()) {
        throw ContractViolation(
            "state length " + std::to_string(state.size()) +
            " does not match model size " + std::to_string(model.size()));
    }
    double field = model.bias(i);
    for (const auto& term : model.neighbors(i)) {
        field += term.weight * state[static_cast<std::size_t>(term.neighbor)];
    }
    return field;
}

std::uint32_t state_index(const SpinState& state) {
    std::uint32_t index = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] > 0) index |= (1u << i);
    }
    return index;
}

SpinState state_from_index(std::uint32_t index, int n) {
    SpinState state(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        state[static_cast<std::size_t>(i)] =
            (index >> i) & 1u ? std::int8_t{1} : std::int8_t{-1};
    }
    return state;
}

namespace {

void check_enumeration_cap(int n, const char* what) {
    if (n > kExactEnumerationMaxSpins) {
        throw CapacityError(std::string(what) + " supports at most " +
                            std::to_string(kExactEnumerationMaxSpins) +
                            " spins, got " + std::to_string(n));
    }
}

}  // namespace

std::vector<double> enumerate_energies(const IsingModel& model) {
    const int n = model.size();
    check_enumeration_cap(n, "exact enumeration");
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> energies(count, 0.0);
    const auto& couplings = model.couplings();
    const auto& biases = model.biases();
    for (std::size_t idx = 0; idx < count; ++idx) {
        double e = 0.0;
        for (const auto& c : couplings) {
            const bool anti = ((idx >> c.i) ^ (idx >> c.j)) & 1u;
            e += anti ? c.weight : -c.weight;
        }
        for (int i = 0; i < n; ++i) {
            e += (idx >> i) & 1u ? -biases[static_cast<std::size_t>(i)]
                                 : biases[static_cast<std::size_t>(i)];
        }
        energies[idx] = e;
    }
    return energies;
}

std::vector<double> boltzmann_from_energies(const std::vector<double>& energies,
                                            double beta) {
    if (energies.empty()) {
        throw ContractViolation("cannot normalize an empty energy table");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ContractViolation("beta must be positive and finite");
    }
    const double e_min = *std::min_element(energies.begin(), energies.end());
    std::vector<double> probs(energies.size());
    double z = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        probs[i] = std::exp(-beta * (energies[i] - e_min));
        z += probs[i];
    }
    for (auto& p : probs) p /= z;
    return probs;
}

ExactDistribution exact_boltzmann(const IsingModel& model, double beta) {
    check_enumeration_cap(model.size(), "exact_boltzmann");
    ExactDistribution dist;
    dist.beta = beta;
    dist.probabilities = boltzmann_from_energies(enumerate_energies(model), beta);
    return dist;
}

GroundStates ground_states(const IsingModel& model) {
    check_enumeration_cap(model.size(), "ground_states");
    const auto energies = enumerate_energies(model);
    GroundStates result;
    result.energy = *std::min_element(energies.begin(), energies.end());
    for (std::size_t idx = 0; idx < energies.size(); ++idx) {
        if (energies[idx] == result.energy) {
            result.states.push_back(
                state_from_index(static_cast<std::uint32_t>(idx), model.size()));
        }
    }
    return result;
}

}  // namespace illusim
