#pragma once

#include <cstdint>
#include <vector>

namespace illusim {

/// One MCMC configuration: spins[i] is exactly -1 or +1.
using SpinState = std::vector<std::int8_t>;

struct CouplingTerm {
    int neighbor;
    double weight;
};

/// A pairwise coupling stored once per unordered pair, i < j.
struct Coupling {
    int i;
    int j;
    double weight;
};

/// Sparse pairwise Ising problem: couplings J and biases h over n spins.
///
/// Energy convention, fixed repo-wide:
///   E(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i
/// so a positive J favors aligned endpoints. Adjacency lists are kept
/// alongside the edge list because the sampler inner loop is a
/// local-field query per update.
class IsingModel {
public:
    explicit IsingModel(int n);

    int size() const noexcept { return n_; }

    void set_bias(int i, double value);

    /// Adds J_ij for an unordered pair. Throws ContractViolation on
    /// self-coupling, out-of-range index, duplicate pair, or non-finite
    /// weight.
    void add_coupling(int i, int j, double weight);

    double bias(int i) const;

    /// Symmetric lookup; 0 when the pair is not coupled.
    double coupling(int i, int j) const;

    const std::vector<double>& biases() const noexcept { return biases_; }
    const std::vector<Coupling>& couplings() const noexcept {
        return couplings_;
    }
    const std::vector<CouplingTerm>& neighbors(int i) const;

    int degree(int i) const;
    int max_degree() const;

    bool operator==(const IsingModel& other) const;

private:
    void check_index(int i) const;

    int n_;
    std::vector<double> biases_;
    std::vector<Coupling> couplings_;
    std::vector<std::vector<CouplingTerm>> adjacency_;
};

/// E(s) under the repo sign convention. Throws on length mismatch.
double energy(const IsingModel& model, const SpinState& state);

/// I_i = sum_j J_ij s_j + h_i. Flipping spin i changes the energy by
/// 2 s_i I_i.
double local_field(const IsingModel& model, const SpinState& state, int i);

/// Throws ContractViolation unless state has length n and entries +-1.
void check_state(const IsingModel& model, const SpinState& state);

/// Bit encoding shared by histograms and exact oracles:
/// bit i of the index is 1 iff s_i = +1.
std::uint32_t state_index(const SpinState& state);
SpinState state_from_index(std::uint32_t index, int n);

/// Hard cap for the exact enumeration oracles (2^24 doubles ~ 128 MiB).
inline constexpr int kExactEnumerationMaxSpins = 24;

/// Boltzmann weights over all 2^n states at inverse temperature beta.
struct ExactDistribution {
    double beta = 1.0;
    std::vector<double> probabilities;  // indexed by state_index
};

/// Energies of all 2^n states in state_index order. Requires n <= 24.
std::vector<double> enumerate_energies(const IsingModel& model);

/// exp(-beta e_i) / Z computed with max-subtraction; sums to 1 within 1e-12.
std::vector<double> boltzmann_from_energies(const std::vector<double>& energies,
                                            double beta);

/// Exact p(s) = exp(-beta E(s)) / Z. Requires n <= 24 (CapacityError).
ExactDistribution exact_boltzmann(const IsingModel& model, double beta);

struct GroundStates {
    double energy = 0.0;
    std::vector<SpinState> states;  // every minimizer, ascending state_index
};

/// Exhaustive minimum over all 2^n states. Requires n <= 24 (CapacityError).
GroundStates ground_states(const IsingModel& model);

}  // namespace illusim
