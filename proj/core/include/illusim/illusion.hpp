#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "illusim/coloring.hpp"
#include "illusim/metrics.hpp"
#include "illusim/model.hpp"
#include "illusim/partition.hpp"
#include "illusim/sampler.hpp"

namespace illusim {

/// Per-chip model parameters. The defaults describe a chip that retires
/// 1e10 spin updates per second at 10 W; they are model inputs, not
/// measurements.
struct ChipConfig {
    std::int64_t capacity = std::numeric_limits<std::int64_t>::max();
    double update_rate = 1e10;      // spin updates per second
    double active_power = 10.0;     // watts while computing
    double idle_power = 0.1;        // watts while waiting
    double wakeup_latency = 1e-6;   // seconds per wakeup event
    double shutdown_latency = 1e-6; // seconds per shutdown event

    void validate() const;
};

struct InterconnectConfig {
    std::int64_t exchange_interval = 1;  // tau: local sweeps per exchange
    std::int64_t delivery_delay = 0;     // sweeps of staleness, async only
    double per_message_overhead = 0.0;   // seconds per exchange round
    double payload_bytes_per_spin = 1.0;

    void validate() const;
};

enum class ScheduleMode { Synchronous, Asynchronous };

std::string to_string(ScheduleMode mode);

/// A partitioned model mapped onto virtual chips. Each chip owns its local
/// spins and keeps read-only ghost replicas of the remote endpoints of its
/// cut couplings. RNG streams stay keyed by global spin id, so the random
/// sequence never depends on the partition.
struct IllusionSystem {
    struct Chip {
        std::vector<int> local_spins;  // ascending global ids
        std::vector<int> ghost_spins;  // ascending global ids
        std::vector<std::vector<int>> color_spins;  // per color, local ids
    };

    /// One directed boundary channel c -> d.
    struct Channel {
        int src = 0;
        int dst = 0;
        std::vector<int> send_spins;  // global ids owned by src
        std::vector<int> dst_slots;   // ghost slots on dst, parallel array
    };

    /// Field term for one neighbor of a local spin: read values[neighbor]
    /// when ghost_slot < 0, otherwise the owner chip's ghost table.
    struct FieldTerm {
        double weight = 0.0;
        int neighbor = 0;
        int ghost_slot = -1;
    };

    IsingModel model;
    PartitionResult partition;
    ScheduleMode mode = ScheduleMode::Synchronous;
    ChipConfig chip_config;
    InterconnectConfig interconnect;
    int num_chips = 0;
    std::vector<int> owner = {};  // spin -> chip
    std::vector<Chip> chips = {};
    std::vector<Channel> channels = {};  // ascending (src, dst)
    std::int64_t directed_cut_pairs = 0;
    Coloring coloring = {};
    std::vector<std::vector<int>> color_classes = {};  // global, ascending ids
    std::vector<std::vector<FieldTerm>> field_terms = {};  // per global spin
};

enum class RunKind { Ideal, Partitioned };

/// Trace plus the distributed-execution accounting for one run.
struct RunReport {
    SampleTrace trace;
    RunKind kind = RunKind::Partitioned;
    ScheduleMode mode = ScheduleMode::Synchronous;
    int num_chips = 1;
    std::int64_t tau = 1;
    std::int64_t delay = 0;
    std::vector<std::uint64_t> chip_updates;
    std::vector<std::uint64_t> chip_draws;
    std::vector<std::vector<int>> chip_color_counts;  // chip x color
    std::uint64_t exchange_rounds = 0;
    std::uint64_t messages = 0;
    double boundary_bytes = 0.0;
    std::uint64_t wakeup_shutdown_events = 0;
    double wall_time_s = 0.0;
    double energy_proxy_j = 0.0;
    double effective_flips_per_s = 0.0;
    double effective_draws_per_s = 0.0;
    bool has_comparison = false;
    ComparisonReport comparison;
};

/// Validates capacities and builds chips, ghost tables, and boundary
/// channels. Throws CapacityError naming the first chip whose part
/// exceeds the capacity.
IllusionSystem build_system(const IsingModel& model,
                            const PartitionResult& partition,
                            const ChipConfig& chip_config,
                            const InterconnectConfig& interconnect,
                            ScheduleMode mode);

/// Lock-step distributed run. Boundary values are exchanged at a global
/// barrier after every tau local sweeps; with tau == 1 the exchange runs
/// after every color phase, which makes the trajectory bit-identical to
/// ideal_reference_run. Requires mode == Synchronous.
RunReport sync_run(const IllusionSystem& system, const SamplerConfig& config);

/// Barrier-free run on a deterministic logical clock: an exchange sent at
/// the end of sender sweep u becomes visible to receiver sweeps later than
/// u + delivery_delay. delay == 0 with tau == 1 reproduces sync_run
/// exactly. Requires mode == Asynchronous.
RunReport async_run(const IllusionSystem& system, const SamplerConfig& config);

/// Single chip large enough for the whole graph: a chromatic-Gibbs run
/// with the same global RNG keying and zero messages. The baseline every
/// partitioned run is compared against.
RunReport ideal_reference_run(const IsingModel& model,
                              const SamplerConfig& config,
                              const ChipConfig& chip_config = {});

struct Accounting {
    double wall_time_s = 0.0;
    double energy_proxy_j = 0.0;
    double effective_flips_per_s = 0.0;
    double effective_draws_per_s = 0.0;
};

/// Wall time, energy proxy, and effective rates from a populated report:
/// wall = aligned compute + rounds * per-message overhead; energy charges
/// active power for compute, idle power for the rest, plus
/// wakeup/shutdown events at active power over their latencies.
Accounting account(const RunReport& report, const ChipConfig& chip_config,
                   const InterconnectConfig& interconnect);

}  // namespace illusim
