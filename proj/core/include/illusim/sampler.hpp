#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "illusim/coloring.hpp"
#include "illusim/model.hpp"
#include "illusim/parallel.hpp"
#include "illusim/rng.hpp"

namespace illusim {

enum class Kernel {
    SequentialGibbs,
    ChromaticGibbs,
};

/// Inverse-temperature trajectory over the sweeps of a run.
struct BetaSchedule {
    enum class Kind { Constant, Linear, Geometric };

    Kind kind = Kind::Constant;
    double beta_start = 1.0;
    double beta_end = 1.0;

    static BetaSchedule constant(double beta) {
        return {Kind::Constant, beta, beta};
    }
    static BetaSchedule linear(double from, double to) {
        return {Kind::Linear, from, to};
    }
    static BetaSchedule geometric(double from, double to) {
        return {Kind::Geometric, from, to};
    }

    /// Beta for sweep (1-based) out of total_sweeps.
    double at(std::int64_t sweep, std::int64_t total_sweeps) const;

    void validate() const;
};

struct SamplerConfig {
    Kernel kernel = Kernel::SequentialGibbs;
    BetaSchedule schedule = BetaSchedule::constant(1.0);
    std::int64_t sweeps = 1;
    std::int64_t burnin = 0;
    std::int64_t thinning = 1;
    std::uint64_t seed = 0;
    /// Keep whole states in addition to the histogram (memory-heavy;
    /// the only way to record anything for n > 24).
    bool record_states = false;
    /// Workers for color phases; 1 = serial, 0 = auto.
    int threads = 1;

    void validate() const;
};

/// Everything one run records. The histogram covers all 2^n state
/// indices when n <= 24 and is empty otherwise.
struct SampleTrace {
    int n = 0;
    std::int64_t sweeps = 0;
    std::int64_t burnin = 0;
    std::int64_t thinning = 1;
    std::vector<std::uint64_t> histogram;
    std::vector<double> energy_per_sweep;
    std::vector<SpinState> recorded_states;
    SpinState final_state;
    std::uint64_t rng_draws = 0;
    std::uint64_t attempted_updates = 0;
    std::uint64_t accepted_flips = 0;
    std::uint64_t recorded_samples = 0;
};

/// Deterministic byte serialization, used for trajectory-identity checks.
std::string serialize(const SampleTrace& trace);

/// Heat-bath decision shared by every engine in the repo: +1 with
/// probability 1/(1+exp(-2 beta field)).
inline std::int8_t gibbs_decide(double field, double beta, double u) {
    const double p_up = 1.0 / (1.0 + std::exp(-2.0 * beta * field));
    return u < p_up ? std::int8_t{1} : std::int8_t{-1};
}

/// Heat-bath update of spin i given a uniform draw u in [0,1).
std::int8_t gibbs_update(const IsingModel& model, const SpinState& state, int i,
                         double beta, double u);

/// The same decision written as the p-bit rule
/// s_i = sign(tanh(beta I_i) - (2u - 1)); agrees with gibbs_update on
/// every input.
std::int8_t pbit_update(const IsingModel& model, const SpinState& state, int i,
                        double beta, double u);

/// Seeded +-1 initial state; uses counter 0 of each spin stream.
SpinState initial_state(int n, std::uint64_t seed);

/// One full sweep updating spins 0..n-1 in index order; each update sees
/// all earlier updates of the same sweep. Consumes exactly n draws.
void sequential_sweep(const IsingModel& model, SpinState& state, double beta,
                      SpinRng& rng);

/// Color-phase sweep: colors ascending, all spins of one color updated
/// from the state left by the previous phases. Within a phase updates are
/// independent, so execution order (or parallel workers) cannot change
/// the result. Throws if the coloring is not proper.
void chromatic_sweep(const IsingModel& model, SpinState& state, double beta,
                     const Coloring& coloring, SpinRng& rng,
                     ThreadPool* pool = nullptr);

/// Full run: burn-in discarded, every thinning-th post-burn-in state
/// recorded, energy recorded every sweep. Deterministic given
/// (model, config).
SampleTrace run(const IsingModel& model, const SamplerConfig& config);

}  // namespace illusim
