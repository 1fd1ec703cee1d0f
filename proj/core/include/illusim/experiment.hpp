#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "illusim/illusion.hpp"
#include "illusim/io.hpp"
#include "illusim/partition.hpp"
#include "illusim/sampler.hpp"

namespace illusim {

inline constexpr int kReportSchemaVersion = 1;

/// Exact-oracle comparisons are attached automatically up to this size
/// (the library oracles themselves go up to kExactEnumerationMaxSpins).
inline constexpr int kAutoExactMaxSpins = 20;

/// One experiment: a reference run plus a (k, tau) grid of partitioned
/// runs, all derived from one master seed.
struct ExperimentConfig {
    std::string model_path;
    ModelFormat format = ModelFormat::Native;
    SamplerConfig sampler;
    PartitionSpec partition_spec;       // epsilon / capacity; k comes from k_grid
    ChipConfig chip;
    InterconnectConfig interconnect;    // delay etc.; tau comes from tau_grid
    ScheduleMode mode = ScheduleMode::Synchronous;
    std::vector<int> k_grid;            // empty: reference run only
    std::vector<std::int64_t> tau_grid; // empty: {interconnect.exchange_interval}
    std::string output_dir;
    std::uint64_t master_seed = 0;
    int threads = 1;
};

/// One metrics.csv row.
struct RunRow {
    std::string label;
    std::string mode;  // "ideal" | "sync" | "async"
    int k = 1;
    std::int64_t tau = 0;
    std::int64_t delay = 0;
    double tv = 0.0;
    double kl = 0.0;
    double best_energy = 0.0;
    double wall_time_s = 0.0;
    double energy_proxy_j = 0.0;
    std::uint64_t messages = 0;
    bool has_exact = false;
};

struct ExperimentResult {
    std::vector<RunRow> rows;
    std::string report_path;
    std::string metrics_path;
    std::string sweep_energy_path;
};

/// Fills accuracy and performance comparisons for one run. `exact`,
/// `ground`, and `ideal` may be null when unavailable.
ComparisonReport build_comparison(const RunReport& run,
                                  const ExactDistribution* exact,
                                  const GroundStates* ground,
                                  const RunReport* ideal);

/// Runs the reference and every grid point, then writes report.json,
/// metrics.csv, and sweep_energy.csv into output_dir. Outputs are byte
/// deterministic given the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Collects every report.json under results_dir into tidy long-format
/// tables: accuracy_vs_tau.csv, walltime_vs_k.csv, tv_vs_sweeps.csv.
/// Throws IoError (writing nothing) when no reports are found.
void emit_plot_data(const std::string& results_dir,
                    const std::string& out_dir);

}  // namespace illusim
