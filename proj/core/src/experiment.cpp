#include "illusim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "illusim/error.hpp"
#include "illusim/metrics.hpp"
#include "illusim/rng.hpp"

namespace illusim {

namespace fs = std::filesystem;
using nlohmann::json;

ComparisonReport build_comparison(const RunReport& run,
                                  const ExactDistribution* exact,
                                  const GroundStates* ground,
                                  const RunReport* ideal) {
    ComparisonReport report;
    const auto& trace = run.trace;

    report.best_energy = std::numeric_limits<double>::quiet_NaN();
    if (!trace.energy_per_sweep.empty()) {
        report.best_energy = *std::min_element(trace.energy_per_sweep.begin(),
                                               trace.energy_per_sweep.end());
    }

    if (trace.sweeps - trace.burnin >= 100) {
        const std::vector<double> post(
            trace.energy_per_sweep.begin() +
                static_cast<std::ptrdiff_t>(trace.burnin),
            trace.energy_per_sweep.end());
        const auto ac = autocorrelation_time(post);
        report.autocorrelation_time = ac.time;
        report.autocorrelation_flagged = ac.zero_variance;
    } else {
        report.autocorrelation_time = 0.5;
        report.autocorrelation_flagged = true;
    }

    if (exact != nullptr && !trace.histogram.empty() &&
        trace.recorded_samples > 0) {
        const auto empirical = normalize_histogram(trace.histogram);
        report.tv_distance = tv_distance(empirical, exact->probabilities);
        report.kl_divergence = kl_divergence(empirical, exact->probabilities);
        report.has_exact_reference = true;
    }

    if (ground != nullptr && !trace.histogram.empty() &&
        trace.recorded_samples > 0) {
        report.ground_state_probability =
            ground_state_probability(trace, ground->states);
    }

    if (ideal != nullptr && ideal->effective_draws_per_s > 0.0) {
        report.throughput_ratio_vs_ideal =
            run.effective_draws_per_s / ideal->effective_draws_per_s;
    }
    return report;
}

namespace {

std::string run_label(const RunReport& run) {
    if (run.kind == RunKind::Ideal) return "ideal";
    return to_string(run.mode) + "_k" + std::to_string(run.num_chips) +
           "_tau" + std::to_string(run.tau);
}

json comparison_to_json(const ComparisonReport& c) {
    json j;
    j["tv_distance"] = c.has_exact_reference ? json(c.tv_distance) : json();
    j["kl_divergence"] = c.has_exact_reference ? json(c.kl_divergence) : json();
    j["autocorrelation_time"] = c.autocorrelation_time;
    j["autocorrelation_flagged"] = c.autocorrelation_flagged;
    j["best_energy"] = c.best_energy;
    j["ground_state_probability"] = c.ground_state_probability;
    j["throughput_ratio_vs_ideal"] = c.throughput_ratio_vs_ideal;
    return j;
}

json run_to_json(const RunReport& run, const PartitionResult* partition) {
    json j;
    j["label"] = run_label(run);
    j["kind"] = run.kind == RunKind::Ideal ? "ideal" : "partitioned";
    j["mode"] = run.kind == RunKind::Ideal ? "ideal" : to_string(run.mode);
    j["k"] = run.num_chips;
    j["tau"] = run.tau;
    j["delay"] = run.delay;
    j["sweeps"] = run.trace.sweeps;
    j["burnin"] = run.trace.burnin;
    j["thinning"] = run.trace.thinning;
    j["recorded_samples"] = run.trace.recorded_samples;
    j["rng_draws"] = run.trace.rng_draws;
    j["attempted_updates"] = run.trace.attempted_updates;
    j["accepted_flips"] = run.trace.accepted_flips;
    j["chip_updates"] = run.chip_updates;
    j["chip_draws"] = run.chip_draws;
    j["exchange_rounds"] = run.exchange_rounds;
    j["messages"] = run.messages;
    j["boundary_bytes"] = run.boundary_bytes;
    j["wakeup_shutdown_events"] = run.wakeup_shutdown_events;
    j["wall_time_s"] = run.wall_time_s;
    j["energy_proxy_j"] = run.energy_proxy_j;
    j["effective_flips_per_s"] = run.effective_flips_per_s;
    j["effective_draws_per_s"] = run.effective_draws_per_s;
    j["final_energy"] = run.trace.energy_per_sweep.empty()
                            ? json()
                            : json(run.trace.energy_per_sweep.back());
    if (run.has_comparison) {
        j["comparison"] = comparison_to_json(run.comparison);
    }
    if (partition != nullptr) {
        json p;
        p["cut_weight"] = partition->cut_weight;
        p["part_sizes"] = partition->part_sizes;
        j["partition"] = p;
    } else {
        j["partition"] = json();
    }
    return j;
}

std::string csv_field(double v) { return format_double(v); }

/// Reruns fn with the experiment stage name prepended to any library
/// error, preserving the error type (and with it the CLI exit code).
template <typename Fn>
auto with_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ContractViolation& e) {
        throw ContractViolation(stage + ": " + e.what());
    } catch (const CapacityError& e) {
        throw CapacityError(stage + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(stage + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(stage + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(stage + ": " + e.what());
    }
}

RunRow make_row(const RunReport& run) {
    RunRow row;
    row.label = run_label(run);
    row.mode = run.kind == RunKind::Ideal ? "ideal" : to_string(run.mode);
    row.k = run.num_chips;
    row.tau = run.tau;
    row.delay = run.delay;
    row.has_exact = run.has_comparison && run.comparison.has_exact_reference;
    row.tv = row.has_exact ? run.comparison.tv_distance
                           : std::numeric_limits<double>::quiet_NaN();
    row.kl = row.has_exact ? run.comparison.kl_divergence
                           : std::numeric_limits<double>::quiet_NaN();
    row.best_energy = run.has_comparison
                          ? run.comparison.best_energy
                          : std::numeric_limits<double>::quiet_NaN();
    row.wall_time_s = run.wall_time_s;
    row.energy_proxy_j = run.energy_proxy_j;
    row.messages = run.messages;
    return row;
}

/// Reference run for an experiment: the chromatic ideal unless the user
/// explicitly asked for the sequential kernel.
RunReport package_reference_run(const IsingModel& model,
                                const SamplerConfig& sampler,
                                const ChipConfig& chip) {
    if (sampler.kernel == Kernel::ChromaticGibbs) {
        return ideal_reference_run(model, sampler, chip);
    }
    RunReport report;
    report.trace = run(model, sampler);
    report.kind = RunKind::Ideal;
    report.mode = ScheduleMode::Synchronous;
    report.num_chips = 1;
    report.tau = 0;
    report.delay = 0;
    report.chip_updates = {report.trace.attempted_updates};
    report.chip_draws = {report.trace.rng_draws};
    report.chip_color_counts = {{model.size()}};
    const auto accounting = account(report, chip, InterconnectConfig{});
    report.wall_time_s = accounting.wall_time_s;
    report.energy_proxy_j = accounting.energy_proxy_j;
    report.effective_flips_per_s = accounting.effective_flips_per_s;
    report.effective_draws_per_s = accounting.effective_draws_per_s;
    return report;
}

std::string metrics_csv(const std::vector<RunRow>& rows) {
    std::string out =
        "mode,k,tau,delay,tv,kl,best_energy,wall_time_s,energy_proxy_j,"
        "messages\n";
    for (const auto& row : rows) {
        out += row.mode + "," + std::to_string(row.k) + "," +
               std::to_string(row.tau) + "," + std::to_string(row.delay) +
               "," + csv_field(row.tv) + "," + csv_field(row.kl) + "," +
               csv_field(row.best_energy) + "," + csv_field(row.wall_time_s) +
               "," + csv_field(row.energy_proxy_j) + "," +
               std::to_string(row.messages) + "\n";
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.output_dir.empty()) {
        throw ConfigError("output directory must be set");
    }
    const LoadedModel loaded = with_stage(
        "load_model", [&] { return load_model(config.model_path, config.format); });
    const IsingModel& model = loaded.model;
    const int n = model.size();

    SamplerConfig sampler = config.sampler;
    with_stage("sampler config", [&] { sampler.validate(); });
    sampler.threads = config.threads;

    for (int k : config.k_grid) {
        PartitionSpec spec = config.partition_spec;
        spec.num_parts = k;
        try {
            spec.validate(n);
        } catch (const ContractViolation& e) {
            throw ConfigError(std::string("partition spec (k=") +
                              std::to_string(k) + "): " + e.what());
        }
    }

    // Stationary comparisons only make sense at fixed temperature.
    const bool constant_beta =
        sampler.schedule.kind == BetaSchedule::Kind::Constant;
    std::unique_ptr<ExactDistribution> exact;
    std::unique_ptr<GroundStates> ground;
    if (n <= kAutoExactMaxSpins) {
        with_stage("exact reference", [&] {
            if (constant_beta) {
                exact = std::make_unique<ExactDistribution>(
                    exact_boltzmann(model, sampler.schedule.beta_start));
            }
            ground = std::make_unique<GroundStates>(ground_states(model));
        });
    }

    std::vector<RunReport> reports;
    std::vector<const PartitionResult*> report_partitions;
    std::vector<std::unique_ptr<PartitionResult>> partitions;

    RunReport ideal = with_stage("reference run", [&] {
        return package_reference_run(model, sampler, config.chip);
    });
    ideal.comparison =
        build_comparison(ideal, exact.get(), ground.get(), nullptr);
    ideal.has_comparison = true;

    std::vector<std::int64_t> taus = config.tau_grid;
    if (taus.empty()) taus = {config.interconnect.exchange_interval};

    for (int k : config.k_grid) {
        PartitionSpec spec = config.partition_spec;
        spec.num_parts = k;
        spec.seed = mix_seed(config.master_seed, 0x7041u + static_cast<std::uint64_t>(k));
        auto part = std::make_unique<PartitionResult>(
            with_stage("partition (k=" + std::to_string(k) + ")",
                       [&] { return partition(model, spec); }));
        for (std::int64_t tau : taus) {
            const std::string point =
                "k=" + std::to_string(k) + ", tau=" + std::to_string(tau);
            InterconnectConfig net = config.interconnect;
            net.exchange_interval = tau;
            const IllusionSystem system =
                with_stage("build_system (" + point + ")", [&] {
                    return build_system(model, *part, config.chip, net,
                                        config.mode);
                });
            RunReport run = with_stage(
                to_string(config.mode) + " run (" + point + ")", [&] {
                    return config.mode == ScheduleMode::Synchronous
                               ? sync_run(system, sampler)
                               : async_run(system, sampler);
                });
            run.comparison =
                build_comparison(run, exact.get(), ground.get(), &ideal);
            run.has_comparison = true;
            reports.push_back(std::move(run));
            report_partitions.push_back(part.get());
        }
        partitions.push_back(std::move(part));
    }

    // The reference row leads; grid rows follow in grid order.
    ExperimentResult result;
    result.rows.push_back(make_row(ideal));
    for (const auto& report : reports) {
        result.rows.push_back(make_row(report));
    }

    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["model"] = {{"path", config.model_path},
                    {"format", to_string(config.format)},
                    {"n", n},
                    {"couplings", model.couplings().size()},
                    {"offset", loaded.offset}};
    doc["seed"] = config.master_seed;
    doc["mode"] = to_string(config.mode);
    doc["sampler"] = {
        {"kernel", sampler.kernel == Kernel::SequentialGibbs ? "sequential"
                                                             : "chromatic"},
        {"beta_start", sampler.schedule.beta_start},
        {"beta_end", sampler.schedule.beta_end},
        {"schedule",
         sampler.schedule.kind == BetaSchedule::Kind::Constant ? "constant"
         : sampler.schedule.kind == BetaSchedule::Kind::Linear ? "linear"
                                                               : "geometric"},
        {"sweeps", sampler.sweeps},
        {"burnin", sampler.burnin},
        {"thinning", sampler.thinning}};
    doc["chip"] = {{"capacity", config.chip.capacity},
                   {"update_rate", config.chip.update_rate},
                   {"active_power", config.chip.active_power},
                   {"idle_power", config.chip.idle_power},
                   {"wakeup_latency", config.chip.wakeup_latency},
                   {"shutdown_latency", config.chip.shutdown_latency}};
    doc["interconnect"] = {
        {"delivery_delay", config.interconnect.delivery_delay},
        {"per_message_overhead", config.interconnect.per_message_overhead},
        {"payload_bytes_per_spin", config.interconnect.payload_bytes_per_spin}};
    doc["exact_reference"] = exact != nullptr;
    json runs = json::array();
    runs.push_back(run_to_json(ideal, nullptr));
    for (std::size_t r = 0; r < reports.size(); ++r) {
        runs.push_back(run_to_json(reports[r], report_partitions[r]));
    }
    doc["runs"] = runs;

    fs::create_directories(config.output_dir);
    result.report_path = (fs::path(config.output_dir) / "report.json").string();
    result.metrics_path = (fs::path(config.output_dir) / "metrics.csv").string();
    result.sweep_energy_path =
        (fs::path(config.output_dir) / "sweep_energy.csv").string();

    atomic_write(result.report_path, doc.dump(2) + "\n");
    atomic_write(result.metrics_path, metrics_csv(result.rows));

    std::string sweep_csv = "run,sweep,energy\n";
    const auto append_series = [&](const RunReport& run) {
        const std::string label = run_label(run);
        for (std::size_t s = 0; s < run.trace.energy_per_sweep.size(); ++s) {
            sweep_csv += label + "," + std::to_string(s + 1) + "," +
                         format_double(run.trace.energy_per_sweep[s]) + "\n";
        }
    };
    append_series(ideal);
    for (const auto& report : reports) append_series(report);
    atomic_write(result.sweep_energy_path, sweep_csv);

    return result;
}

void emit_plot_data(const std::string& results_dir,
                    const std::string& out_dir) {
    if (!fs::exists(results_dir)) {
        throw IoError("results directory '" + results_dir + "' not found");
    }
    std::vector<fs::path> report_files;
    for (const auto& entry : fs::recursive_directory_iterator(results_dir)) {
        if (entry.is_regular_file() &&
            entry.path().filename() == "report.json") {
            report_files.push_back(entry.path());
        }
    }
    std::sort(report_files.begin(), report_files.end());
    if (report_files.empty()) {
        throw IoError("no report.json found under '" + results_dir + "'");
    }

    std::string accuracy = "source,mode,k,tau,delay,sweeps,tv,kl\n";
    std::string walltime =
        "source,mode,k,tau,delay,wall_time_s,energy_proxy_j,messages\n";
    std::string tv_sweeps = "source,mode,k,tau,delay,sweeps,tv\n";

    for (const auto& file : report_files) {
        std::ifstream in(file);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ParseError(file.string() + ": invalid JSON: " + e.what());
        }
        if (!doc.contains("schema_version") ||
            doc["schema_version"].get<int>() != kReportSchemaVersion) {
            throw ParseError(file.string() + ": unsupported schema version");
        }
        const std::string source =
            fs::relative(file.parent_path(), results_dir).string();
        for (const auto& run : doc["runs"]) {
            const std::string mode = run["mode"].get<std::string>();
            const std::string k = std::to_string(run["k"].get<int>());
            const std::string tau =
                std::to_string(run["tau"].get<std::int64_t>());
            const std::string delay =
                std::to_string(run["delay"].get<std::int64_t>());
            const std::string sweeps =
                std::to_string(run["sweeps"].get<std::int64_t>());
            std::string tv = "nan";
            std::string kl = "nan";
            if (run.contains("comparison") && !run["comparison"].is_null()) {
                const auto& comparison = run["comparison"];
                if (!comparison["tv_distance"].is_null()) {
                    tv = format_double(comparison["tv_distance"].get<double>());
                }
                if (!comparison["kl_divergence"].is_null()) {
                    kl = format_double(
                        comparison["kl_divergence"].get<double>());
                }
            }
            const std::string prefix =
                source + "," + mode + "," + k + "," + tau + "," + delay;
            accuracy += prefix + "," + sweeps + "," + tv + "," + kl + "\n";
            walltime += prefix + "," +
                        format_double(run["wall_time_s"].get<double>()) + "," +
                        format_double(run["energy_proxy_j"].get<double>()) +
                        "," +
                        std::to_string(run["messages"].get<std::uint64_t>()) +
                        "\n";
            tv_sweeps += prefix + "," + sweeps + "," + tv + "\n";
        }
    }

    fs::create_directories(out_dir);
    atomic_write((fs::path(out_dir) / "accuracy_vs_tau.csv").string(),
                 accuracy);
    atomic_write((fs::path(out_dir) / "walltime_vs_k.csv").string(), walltime);
    atomic_write((fs::path(out_dir) / "tv_vs_sweeps.csv").string(), tv_sweeps);
}

}  // namespace illusim
