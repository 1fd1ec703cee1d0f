#include "illusim/illusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <string>

#include "illusim/error.hpp"
#include "illusim/parallel.hpp"
#include "illusim/rng.hpp"

namespace illusim {

void ChipConfig::validate() const {
    if (capacity < 1) {
        throw ContractViolation("chip capacity must be >= 1");
    }
    const double values[] = {update_rate, active_power, idle_power,
                             wakeup_latency, shutdown_latency};
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ContractViolation(
                "chip rates, powers, and latencies must be nonnegative and "
                "finite");
        }
    }
    if (!(update_rate > 0.0)) {
        throw ContractViolation("chip update rate must be positive");
    }
}

void InterconnectConfig::validate() const {
    if (exchange_interval < 1) {
        throw ContractViolation("exchange interval tau must be >= 1");
    }
    if (delivery_delay < 0) {
        throw ContractViolation("delivery delay must be >= 0");
    }
    if (!(per_message_overhead >= 0.0) || !std::isfinite(per_message_overhead)) {
        throw ContractViolation("per-message overhead must be nonnegative");
    }
    if (!(payload_bytes_per_spin >= 0.0) ||
        !std::isfinite(payload_bytes_per_spin)) {
        throw ContractViolation("payload bytes per spin must be nonnegative");
    }
}

std::string to_string(ScheduleMode mode) {
    return mode == ScheduleMode::Synchronous ? "sync" : "async";
}

IllusionSystem build_system(const IsingModel& model,
                            const PartitionResult& partition,
                            const ChipConfig& chip_config,
                            const InterconnectConfig& interconnect,
                            ScheduleMode mode) {
    chip_config.validate();
    interconnect.validate();
    const int n = model.size();
    if (static_cast<int>(partition.assignment.size()) != n) {
        throw ContractViolation("partition does not cover the model");
    }
    const int k = static_cast<int>(partition.part_sizes.size());
    if (k < 1) {
        throw ContractViolation("partition has no parts");
    }
    for (int c = 0; c < k; ++c) {
        if (partition.part_sizes[static_cast<std::size_t>(c)] >
            chip_config.capacity) {
            throw CapacityError(
                "chip " + std::to_string(c) + " would hold " +
                std::to_string(partition.part_sizes[static_cast<std::size_t>(c)]) +
                " spins, above its capacity " +
                std::to_string(chip_config.capacity));
        }
    }

    IllusionSystem system{model, partition, mode, chip_config, interconnect};
    system.num_chips = k;
    system.owner = partition.assignment;
    system.chips.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
        const int c = system.owner[static_cast<std::size_t>(i)];
        if (c < 0 || c >= k) {
            throw ContractViolation("spin " + std::to_string(i) +
                                    " assigned to invalid chip " +
                                    std::to_string(c));
        }
        system.chips[static_cast<std::size_t>(c)].local_spins.push_back(i);
    }

    // Ghost tables: the remote endpoints of each chip's cut couplings.
    std::vector<std::vector<int>> ghosts(static_cast<std::size_t>(k));
    for (const auto& coupling : model.couplings()) {
        const int a = system.owner[static_cast<std::size_t>(coupling.i)];
        const int b = system.owner[static_cast<std::size_t>(coupling.j)];
        if (a == b) continue;
        ghosts[static_cast<std::size_t>(a)].push_back(coupling.j);
        ghosts[static_cast<std::size_t>(b)].push_back(coupling.i);
    }
    for (int c = 0; c < k; ++c) {
        auto& g = ghosts[static_cast<std::size_t>(c)];
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        system.chips[static_cast<std::size_t>(c)].ghost_spins = g;
    }

    const auto ghost_slot = [&](int chip, int spin) {
        const auto& g = system.chips[static_cast<std::size_t>(chip)].ghost_spins;
        const auto it = std::lower_bound(g.begin(), g.end(), spin);
        return static_cast<int>(it - g.begin());
    };

    // Directed boundary channels, ascending (src, dst).
    std::map<std::pair<int, int>, std::vector<int>> sends;
    for (const auto& coupling : model.couplings()) {
        const int a = system.owner[static_cast<std::size_t>(coupling.i)];
        const int b = system.owner[static_cast<std::size_t>(coupling.j)];
        if (a == b) continue;
        sends[{a, b}].push_back(coupling.i);
        sends[{b, a}].push_back(coupling.j);
    }
    for (auto& [key, spins] : sends) {
        std::sort(spins.begin(), spins.end());
        spins.erase(std::unique(spins.begin(), spins.end()), spins.end());
        IllusionSystem::Channel channel;
        channel.src = key.first;
        channel.dst = key.second;
        channel.send_spins = spins;
        channel.dst_slots.reserve(spins.size());
        for (int s : spins) {
            channel.dst_slots.push_back(ghost_slot(key.second, s));
        }
        system.channels.push_back(std::move(channel));
    }
    system.directed_cut_pairs =
        static_cast<std::int64_t>(system.channels.size());

    system.coloring = greedy_coloring(model);
    system.color_classes = color_classes(system.coloring);
    for (auto& chip : system.chips) {
        chip.color_spins.assign(
            static_cast<std::size_t>(system.coloring.num_colors), {});
    }
    for (int i = 0; i < n; ++i) {
        const int c = system.owner[static_cast<std::size_t>(i)];
        const int color = system.coloring.color[static_cast<std::size_t>(i)];
        system.chips[static_cast<std::size_t>(c)]
            .color_spins[static_cast<std::size_t>(color)]
            .push_back(i);
    }

    system.field_terms.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int c = system.owner[static_cast<std::size_t>(i)];
        auto& terms = system.field_terms[static_cast<std::size_t>(i)];
        for (const auto& nb : model.neighbors(i)) {
            IllusionSystem::FieldTerm term;
            term.weight = nb.weight;
            term.neighbor = nb.neighbor;
            term.ghost_slot =
                system.owner[static_cast<std::size_t>(nb.neighbor)] == c
                    ? -1
                    : ghost_slot(c, nb.neighbor);
            terms.push_back(term);
        }
    }
    return system;
}

namespace {

struct Delivery {
    std::int64_t at = 0;  // first global phase allowed to see the payload
    int channel = 0;
    std::vector<std::int8_t> payload;
};

class DistributedEngine {
public:
    DistributedEngine(const IllusionSystem& system, const SamplerConfig& config)
        : system_(system),
          config_(config),
          n_(system.model.size()),
          num_colors_(system.coloring.num_colors),
          rng_(config.seed, system.model.size()) {
        config_.validate();
        values_ = initial_state(n_, config_.seed);
        ghost_values_.resize(system_.chips.size());
        for (std::size_t c = 0; c < system_.chips.size(); ++c) {
            const auto& ghost_ids = system_.chips[c].ghost_spins;
            auto& slots = ghost_values_[c];
            slots.resize(ghost_ids.size());
            for (std::size_t s = 0; s < ghost_ids.size(); ++s) {
                slots[s] = values_[static_cast<std::size_t>(ghost_ids[s])];
            }
        }
        const int workers = resolve_thread_count(config_.threads);
        if (workers > 1) pool_ = std::make_unique<ThreadPool>(workers);
    }

    RunReport run() {
        RunReport report;
        report.kind = RunKind::Partitioned;
        report.mode = system_.mode;
        report.num_chips = system_.num_chips;
        report.tau = system_.interconnect.exchange_interval;
        report.delay = system_.mode == ScheduleMode::Asynchronous
                           ? system_.interconnect.delivery_delay
                           : 0;
        report.chip_updates.assign(system_.chips.size(), 0);
        report.chip_draws.assign(system_.chips.size(), 0);
        report.chip_color_counts.resize(system_.chips.size());
        for (std::size_t c = 0; c < system_.chips.size(); ++c) {
            auto& counts = report.chip_color_counts[c];
            counts.resize(static_cast<std::size_t>(num_colors_));
            for (int p = 0; p < num_colors_; ++p) {
                counts[static_cast<std::size_t>(p)] = static_cast<int>(
                    system_.chips[c].color_spins[static_cast<std::size_t>(p)]
                        .size());
            }
        }

        SampleTrace& trace = report.trace;
        trace.n = n_;
        trace.sweeps = config_.sweeps;
        trace.burnin = config_.burnin;
        trace.thinning = config_.thinning;
        if (n_ <= kExactEnumerationMaxSpins) {
            trace.histogram.assign(std::size_t{1} << n_, 0);
        }
        trace.energy_per_sweep.resize(static_cast<std::size_t>(config_.sweeps));

        const std::int64_t tau = system_.interconnect.exchange_interval;
        const std::int64_t delay_phases =
            report.delay * static_cast<std::int64_t>(num_colors_);

        for (std::int64_t sweep = 1; sweep <= config_.sweeps; ++sweep) {
            const double beta = config_.schedule.at(sweep, config_.sweeps);
            for (int color = 0; color < num_colors_; ++color) {
                const std::int64_t phase =
                    (sweep - 1) * num_colors_ + color + 1;
                deliver_due(phase);
                trace.accepted_flips += update_phase(color, beta);
                for (std::size_t c = 0; c < system_.chips.size(); ++c) {
                    const auto count = static_cast<std::uint64_t>(
                        report.chip_color_counts[c]
                                                [static_cast<std::size_t>(color)]);
                    report.chip_updates[c] += count;
                    report.chip_draws[c] += count;
                }
                const bool exchange_now =
                    tau == 1 ||
                    (color == num_colors_ - 1 && sweep % tau == 0);
                if (exchange_now) {
                    if (!system_.channels.empty()) {
                        send_all(phase + delay_phases + 1, report);
                    }
                    ++report.exchange_rounds;
                }
            }
            trace.attempted_updates += static_cast<std::uint64_t>(n_);
            trace.energy_per_sweep[static_cast<std::size_t>(sweep - 1)] =
                energy(system_.model, values_);
            if (sweep > config_.burnin &&
                (sweep - config_.burnin - 1) % config_.thinning == 0) {
                if (!trace.histogram.empty()) {
                    ++trace.histogram[state_index(values_)];
                }
                if (config_.record_states) {
                    trace.recorded_states.push_back(values_);
                }
                ++trace.recorded_samples;
            }
        }
        trace.final_state = values_;
        trace.rng_draws = rng_.draws();

        const auto accounting =
            account(report, system_.chip_config, system_.interconnect);
        report.wall_time_s = accounting.wall_time_s;
        report.energy_proxy_j = accounting.energy_proxy_j;
        report.effective_flips_per_s = accounting.effective_flips_per_s;
        report.effective_draws_per_s = accounting.effective_draws_per_s;
        return report;
    }

private:
    double field_of(int spin) const {
        double field = system_.model.bias(spin);
        const int chip = system_.owner[static_cast<std::size_t>(spin)];
        for (const auto& term :
             system_.field_terms[static_cast<std::size_t>(spin)]) {
            const std::int8_t value =
                term.ghost_slot < 0
                    ? values_[static_cast<std::size_t>(term.neighbor)]
                    : ghost_values_[static_cast<std::size_t>(chip)]
                                   [static_cast<std::size_t>(term.ghost_slot)];
            field += term.weight * value;
        }
        return field;
    }

    std::uint64_t update_phase(int color, double beta) {
        const auto& spins =
            system_.color_classes[static_cast<std::size_t>(color)];
        if (spins.empty()) return 0;
        if (pool_ == nullptr) {
            std::uint64_t accepted = 0;
            for (int spin : spins) {
                const double u = rng_.next_untallied(spin);
                const std::int8_t next = gibbs_decide(field_of(spin), beta, u);
                accepted += next != values_[static_cast<std::size_t>(spin)];
                values_[static_cast<std::size_t>(spin)] = next;
            }
            rng_.add_draws(spins.size());
            return accepted;
        }
        std::vector<std::uint64_t> accepted_per_chunk(
            static_cast<std::size_t>(pool_->workers()), 0);
        pool_->run(spins.size(),
                   [&](std::size_t begin, std::size_t end, int chunk) {
                       std::uint64_t accepted = 0;
                       for (std::size_t s = begin; s < end; ++s) {
                           const int spin = spins[s];
                           const double u = rng_.next_untallied(spin);
                           const std::int8_t next =
                               gibbs_decide(field_of(spin), beta, u);
                           accepted +=
                               next != values_[static_cast<std::size_t>(spin)];
                           values_[static_cast<std::size_t>(spin)] = next;
                       }
                       accepted_per_chunk[static_cast<std::size_t>(chunk)] =
                           accepted;
                   });
        rng_.add_draws(spins.size());
        std::uint64_t accepted = 0;
        for (auto a : accepted_per_chunk) accepted += a;
        return accepted;
    }

    void send_all(std::int64_t visible_at, RunReport& report) {
        for (std::size_t ch = 0; ch < system_.channels.size(); ++ch) {
            const auto& channel = system_.channels[ch];
            Delivery delivery;
            delivery.at = visible_at;
            delivery.channel = static_cast<int>(ch);
            delivery.payload.reserve(channel.send_spins.size());
            for (int spin : channel.send_spins) {
                delivery.payload.push_back(
                    values_[static_cast<std::size_t>(spin)]);
            }
            pending_.push_back(std::move(delivery));
            ++report.messages;
            report.boundary_bytes +=
                static_cast<double>(channel.send_spins.size()) *
                system_.interconnect.payload_bytes_per_spin;
        }
    }

    void deliver_due(std::int64_t phase) {
        while (!pending_.empty() && pending_.front().at <= phase) {
            const Delivery& delivery = pending_.front();
            const auto& channel =
                system_.channels[static_cast<std::size_t>(delivery.channel)];
            auto& slots = ghost_values_[static_cast<std::size_t>(channel.dst)];
            for (std::size_t s = 0; s < channel.dst_slots.size(); ++s) {
                slots[static_cast<std::size_t>(channel.dst_slots[s])] =
                    delivery.payload[s];
            }
            pending_.pop_front();
        }
    }

    const IllusionSystem& system_;
    SamplerConfig config_;
    int n_;
    int num_colors_;
    SpinRng rng_;
    SpinState values_;
    std::vector<std::vector<std::int8_t>> ghost_values_;
    std::deque<Delivery> pending_;
    std::unique_ptr<ThreadPool> pool_;
};

}  // namespace

RunReport sync_run(const IllusionSystem& system, const SamplerConfig& config) {
    if (system.mode != ScheduleMode::Synchronous) {
        throw ContractViolation("sync_run requires a Synchronous system");
    }
    DistributedEngine engine(system, config);
    return engine.run();
}

RunReport async_run(const IllusionSystem& system, const SamplerConfig& config) {
    if (system.mode != ScheduleMode::Asynchronous) {
        throw ContractViolation("async_run requires an Asynchronous system");
    }
    DistributedEngine engine(system, config);
    return engine.run();
}

RunReport ideal_reference_run(const IsingModel& model,
                              const SamplerConfig& config,
                              const ChipConfig& chip_config) {
    chip_config.validate();
    SamplerConfig chromatic = config;
    chromatic.kernel = Kernel::ChromaticGibbs;
    RunReport report;
    report.trace = run(model, chromatic);
    report.kind = RunKind::Ideal;
    report.mode = ScheduleMode::Synchronous;
    report.num_chips = 1;
    report.tau = 0;
    report.delay = 0;
    report.chip_updates = {report.trace.attempted_updates};
    report.chip_draws = {report.trace.rng_draws};
    const auto coloring = greedy_coloring(model);
    const auto classes = color_classes(coloring);
    report.chip_color_counts.resize(1);
    for (const auto& cls : classes) {
        report.chip_color_counts[0].push_back(static_cast<int>(cls.size()));
    }
    const auto accounting = account(report, chip_config, InterconnectConfig{});
    report.wall_time_s = accounting.wall_time_s;
    report.energy_proxy_j = accounting.energy_proxy_j;
    report.effective_flips_per_s = accounting.effective_flips_per_s;
    report.effective_draws_per_s = accounting.effective_draws_per_s;
    return report;
}

Accounting account(const RunReport& report, const ChipConfig& chip_config,
                   const InterconnectConfig& interconnect) {
    chip_config.validate();
    interconnect.validate();
    const auto num_chips = report.chip_updates.size();
    if (num_chips == 0) {
        throw ContractViolation("report has no chip update counts");
    }

    double compute_time = 0.0;
    if (report.kind == RunKind::Partitioned &&
        report.mode == ScheduleMode::Synchronous && report.tau == 1) {
        // Per-phase barriers: every color phase waits for the slowest chip.
        double aligned_per_sweep = 0.0;
        const std::size_t colors =
            report.chip_color_counts.empty()
                ? 0
                : report.chip_color_counts.front().size();
        for (std::size_t p = 0; p < colors; ++p) {
            int worst = 0;
            for (const auto& counts : report.chip_color_counts) {
                worst = std::max(worst, counts[p]);
            }
            aligned_per_sweep += static_cast<double>(worst);
        }
        compute_time = static_cast<double>(report.trace.sweeps) *
                       aligned_per_sweep / chip_config.update_rate;
    } else if (report.kind == RunKind::Partitioned &&
               report.mode == ScheduleMode::Synchronous) {
        // Sweep-aligned supersteps: per sweep the slowest chip sets the pace.
        std::uint64_t worst = 0;
        for (auto updates : report.chip_updates) {
            worst = std::max(worst, updates);
        }
        compute_time = static_cast<double>(worst) / chip_config.update_rate;
    } else {
        std::uint64_t worst = 0;
        for (auto updates : report.chip_updates) {
            worst = std::max(worst, updates);
        }
        compute_time = static_cast<double>(worst) / chip_config.update_rate;
    }

    Accounting accounting;
    accounting.wall_time_s =
        compute_time + static_cast<double>(report.exchange_rounds) *
                           interconnect.per_message_overhead;

    double energy = 0.0;
    for (auto updates : report.chip_updates) {
        const double active =
            static_cast<double>(updates) / chip_config.update_rate;
        const double idle = std::max(0.0, accounting.wall_time_s - active);
        energy += active * chip_config.active_power +
                  idle * chip_config.idle_power;
    }
    energy += static_cast<double>(report.wakeup_shutdown_events) *
              (chip_config.wakeup_latency + chip_config.shutdown_latency) *
              chip_config.active_power;
    accounting.energy_proxy_j = energy;

    if (accounting.wall_time_s > 0.0) {
        accounting.effective_flips_per_s =
            static_cast<double>(report.trace.accepted_flips) /
            accounting.wall_time_s;
        accounting.effective_draws_per_s =
            static_cast<double>(report.trace.rng_draws) /
            accounting.wall_time_s;
    }
    return accounting;
}

}  // namespace illusim
