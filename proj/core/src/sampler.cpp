#include "illusim/sampler.hpp"

#include <cstring>
#include <memory>
#include <string>

#include "illusim/error.hpp"

namespace illusim {

double BetaSchedule::at(std::int64_t sweep, std::int64_t total_sweeps) const {
    if (kind == Kind::Constant || total_sweeps <= 1) return beta_start;
    const double t = static_cast<double>(sweep - 1) /
                     static_cast<double>(total_sweeps - 1);
    switch (kind) {
        case Kind::Linear:
            return beta_start + (beta_end - beta_start) * t;
        case Kind::Geometric:
            return beta_start * std::pow(beta_end / beta_start, t);
        case Kind::Constant:
            break;
    }
    return beta_start;
}

void BetaSchedule::validate() const {
    if (!(beta_start > 0.0) || !std::isfinite(beta_start) ||
        !(beta_end > 0.0) || !std::isfinite(beta_end)) {
        throw ContractViolation("beta values must be positive and finite");
    }
}

void SamplerConfig::validate() const {
    schedule.validate();
    if (sweeps < 1) {
        throw ContractViolation("sweeps must be >= 1, got " +
                                std::to_string(sweeps));
    }
    if (burnin < 0 || burnin >= sweeps) {
        throw ContractViolation("burn-in must be in [0, sweeps), got " +
                                std::to_string(burnin));
    }
    if (thinning < 1) {
        throw ContractViolation("thinning must be >= 1, got " +
                                std::to_string(thinning));
    }
    if (threads < 0) {
        throw ContractViolation("threads must be >= 0, got " +
                                std::to_string(threads));
    }
}

namespace {

void append_bytes(std::string& out, const void* data, std::size_t size) {
    out.append(static_cast<const char*>(data), size);
}

void append_u64(std::string& out, std::uint64_t v) {
    append_bytes(out, &v, sizeof v);
}

}  // namespace

std::string serialize(const SampleTrace& trace) {
    std::string out;
    append_u64(out, static_cast<std::uint64_t>(trace.n));
    append_u64(out, static_cast<std::uint64_t>(trace.sweeps));
    append_u64(out, static_cast<std::uint64_t>(trace.burnin));
    append_u64(out, static_cast<std::uint64_t>(trace.thinning));
    append_u64(out, trace.rng_draws);
    append_u64(out, trace.attempted_updates);
    append_u64(out, trace.accepted_flips);
    append_u64(out, trace.recorded_samples);
    append_u64(out, trace.histogram.size());
    if (!trace.histogram.empty()) {
        append_bytes(out, trace.histogram.data(),
                     trace.histogram.size() * sizeof(std::uint64_t));
    }
    append_u64(out, trace.energy_per_sweep.size());
    if (!trace.energy_per_sweep.empty()) {
        append_bytes(out, trace.energy_per_sweep.data(),
                     trace.energy_per_sweep.size() * sizeof(double));
    }
    append_u64(out, trace.final_state.size());
    if (!trace.final_state.empty()) {
        append_bytes(out, trace.final_state.data(), trace.final_state.size());
    }
    append_u64(out, trace.recorded_states.size());
    for (const auto& s : trace.recorded_states) {
        append_bytes(out, s.data(), s.size());
    }
    return out;
}

std::int8_t gibbs_update(const IsingModel& model, const SpinState& state, int i,
                         double beta, double u) {
    if (u < 0.0 || u >= 1.0) {
        throw ContractViolation("uniform draw must be in [0,1)");
    }
    return gibbs_decide(local_field(model, state, i), beta, u);
}

std::int8_t pbit_update(const IsingModel& model, const SpinState& state, int i,
                        double beta, double u) {
    if (u < 0.0 || u >= 1.0) {
        throw ContractViolation("uniform draw must be in [0,1)");
    }
    const double activation = std::tanh(beta * local_field(model, state, i));
    return activation - (2.0 * u - 1.0) > 0.0 ? std::int8_t{1}
                                              : std::int8_t{-1};
}

SpinState initial_state(int n, std::uint64_t seed) {
    SpinState state(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        state[static_cast<std::size_t>(i)] =
            uniform_draw(seed, static_cast<std::uint64_t>(i), 0) < 0.5
                ? std::int8_t{-1}
                : std::int8_t{1};
    }
    return state;
}

void sequential_sweep(const IsingModel& model, SpinState& state, double beta,
                      SpinRng& rng) {
    const int n = model.size();
    for (int i = 0; i < n; ++i) {
        const double u = rng.next(i);
        state[static_cast<std::size_t>(i)] =
            gibbs_decide(local_field(model, state, i), beta, u);
    }
}

namespace {

/// Updates one color class in place; returns the number of changed spins.
/// Spins of one class share no coupling, so in-place updates are order-free.
std::uint64_t update_color_class(const IsingModel& model, SpinState& state,
                                 double beta, const std::vector<int>& spins,
                                 SpinRng& rng, ThreadPool* pool) {
    if (pool == nullptr || pool->workers() == 1) {
        std::uint64_t accepted = 0;
        for (int spin : spins) {
            const double u = rng.next_untallied(spin);
            const std::int8_t next =
                gibbs_decide(local_field(model, state, spin), beta, u);
            accepted += next != state[static_cast<std::size_t>(spin)];
            state[static_cast<std::size_t>(spin)] = next;
        }
        rng.add_draws(spins.size());
        return accepted;
    }
    std::vector<std::uint64_t> accepted_per_chunk(
        static_cast<std::size_t>(pool->workers()), 0);
    pool->run(spins.size(), [&](std::size_t begin, std::size_t end, int chunk) {
        std::uint64_t accepted = 0;
        for (std::size_t k = begin; k < end; ++k) {
            const int spin = spins[k];
            const double u = rng.next_untallied(spin);
            const std::int8_t next =
                gibbs_decide(local_field(model, state, spin), beta, u);
            accepted += next != state[static_cast<std::size_t>(spin)];
            state[static_cast<std::size_t>(spin)] = next;
        }
        accepted_per_chunk[static_cast<std::size_t>(chunk)] = accepted;
    });
    rng.add_draws(spins.size());
    std::uint64_t accepted = 0;
    for (auto a : accepted_per_chunk) accepted += a;
    return accepted;
}

}  // namespace

void chromatic_sweep(const IsingModel& model, SpinState& state, double beta,
                     const Coloring& coloring, SpinRng& rng, ThreadPool* pool) {
    if (!is_proper(model, coloring)) {
        throw ContractViolation("coloring is not proper for this model");
    }
    const auto classes = color_classes(coloring);
    for (const auto& cls : classes) {
        update_color_class(model, state, beta, cls, rng, pool);
    }
}

SampleTrace run(const IsingModel& model, const SamplerConfig& config) {
    config.validate();
    const int n = model.size();

    SampleTrace trace;
    trace.n = n;
    trace.sweeps = config.sweeps;
    trace.burnin = config.burnin;
    trace.thinning = config.thinning;
    if (n <= kExactEnumerationMaxSpins) {
        trace.histogram.assign(std::size_t{1} << n, 0);
    }
    trace.energy_per_sweep.resize(static_cast<std::size_t>(config.sweeps));

    SpinState state = initial_state(n, config.seed);
    SpinRng rng(config.seed, n);

    const bool chromatic = config.kernel == Kernel::ChromaticGibbs;
    Coloring coloring;
    std::vector<std::vector<int>> classes;
    std::unique_ptr<ThreadPool> pool;
    if (chromatic) {
        coloring = greedy_coloring(model);
        classes = color_classes(coloring);
        const int workers = resolve_thread_count(config.threads);
        if (workers > 1) pool = std::make_unique<ThreadPool>(workers);
    }

    for (std::int64_t sweep = 1; sweep <= config.sweeps; ++sweep) {
        const double beta = config.schedule.at(sweep, config.sweeps);
        if (chromatic) {
            for (const auto& cls : classes) {
                trace.accepted_flips += update_color_class(
                    model, state, beta, cls, rng, pool.get());
            }
        } else {
            for (int i = 0; i < n; ++i) {
                const double u = rng.next(i);
                const std::int8_t next =
                    gibbs_decide(local_field(model, state, i), beta, u);
                trace.accepted_flips +=
                    next != state[static_cast<std::size_t>(i)];
                state[static_cast<std::size_t>(i)] = next;
            }
        }
        trace.attempted_updates += static_cast<std::uint64_t>(n);
        trace.energy_per_sweep[static_cast<std::size_t>(sweep - 1)] =
            energy(model, state);
        if (sweep > config.burnin &&
            (sweep - config.burnin - 1) % config.thinning == 0) {
            if (!trace.histogram.empty()) ++trace.histogram[state_index(state)];
            if (config.record_states) trace.recorded_states.push_back(state);
            ++trace.recorded_samples;
        }
    }
    trace.final_state = state;
    trace.rng_draws = rng.draws();
    return trace;
}

}  // namespace illusim
