// illusim: partition Ising problems across virtual probabilistic chips,
// run distributed Gibbs sampling, and compare against the single-chip
// reference.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "illusim/error.hpp"
#include "illusim/experiment.hpp"
#include "illusim/illusion.hpp"
#include "illusim/io.hpp"
#include "illusim/parallel.hpp"
#include "illusim/partition.hpp"
#include "illusim/sampler.hpp"

namespace {

using namespace illusim;

struct ModelArgs {
    std::string path;
    std::string format = "native";
};

struct SamplerArgs {
    std::string kernel = "chromatic";
    std::string schedule = "constant";
    double beta = 1.0;
    double beta_end = 0.0;  // 0: same as beta
    std::int64_t sweeps = 10000;
    std::int64_t burnin = 0;
    std::int64_t thinning = 1;
    bool record_states = false;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--model", args.path, "Problem file")->required();
    cmd->add_option("--format", args.format,
                    "Input format: native, gset, or qubo")
        ->check(CLI::IsMember({"native", "gset", "qubo"}));
}

void add_sampler_options(CLI::App* cmd, SamplerArgs& args,
                         bool with_kernel = true) {
    if (with_kernel) {
        cmd->add_option("--kernel", args.kernel,
                        "Gibbs kernel: sequential or chromatic")
            ->check(CLI::IsMember({"sequential", "chromatic"}));
    }
    cmd->add_option("--beta", args.beta, "Inverse temperature (start value)");
    cmd->add_option("--beta-end", args.beta_end,
                    "Final beta for annealed schedules");
    cmd->add_option("--schedule", args.schedule,
                    "Beta schedule: constant, linear, or geometric")
        ->check(CLI::IsMember({"constant", "linear", "geometric"}));
    cmd->add_option("--sweeps", args.sweeps, "Total sweeps");
    cmd->add_option("--burnin", args.burnin, "Burn-in sweeps to discard");
    cmd->add_option("--thin", args.thinning, "Record every thin-th state");
    cmd->add_flag("--record-states", args.record_states,
                  "Keep full states in memory in addition to the histogram");
}

SamplerConfig make_sampler_config(const SamplerArgs& args, std::uint64_t seed,
                                  int threads) {
    SamplerConfig config;
    config.kernel = args.kernel == "sequential" ? Kernel::SequentialGibbs
                                                : Kernel::ChromaticGibbs;
    const double beta_end = args.beta_end > 0.0 ? args.beta_end : args.beta;
    if (args.schedule == "linear") {
        config.schedule = BetaSchedule::linear(args.beta, beta_end);
    } else if (args.schedule == "geometric") {
        config.schedule = BetaSchedule::geometric(args.beta, beta_end);
    } else {
        config.schedule = BetaSchedule::constant(args.beta);
    }
    config.sweeps = args.sweeps;
    config.burnin = args.burnin;
    config.thinning = args.thinning;
    config.record_states = args.record_states;
    config.seed = seed;
    config.threads = threads;
    if (config.sweeps < 1) throw ConfigError("--sweeps must be >= 1");
    if (config.burnin < 0 || config.burnin >= config.sweeps) {
        throw ConfigError("--burnin must be in [0, sweeps)");
    }
    if (config.thinning < 1) throw ConfigError("--thin must be >= 1");
    if (!(args.beta > 0.0) || !(beta_end > 0.0)) {
        throw ConfigError("beta values must be positive");
    }
    return config;
}

int run_sample(const ModelArgs& model_args, const SamplerArgs& sampler_args,
               std::uint64_t seed, const std::string& out_dir) {
    ExperimentConfig config;
    config.model_path = model_args.path;
    config.format = parse_format(model_args.format);
    config.threads = thread_count_from_env();
    config.sampler = make_sampler_config(sampler_args, seed, config.threads);
    config.output_dir = out_dir;
    config.master_seed = seed;
    const auto result = run_experiment(config);
    std::cout << "wrote " << result.report_path << ", " << result.metrics_path
              << ", " << result.sweep_energy_path << "\n";
    return 0;
}

int run_partition_cmd(const ModelArgs& model_args, int k, double epsilon,
                      std::int64_t capacity, std::uint64_t seed,
                      const std::string& out_dir) {
    const LoadedModel loaded =
        load_model(model_args.path, parse_format(model_args.format));
    PartitionSpec spec;
    spec.num_parts = k;
    spec.epsilon = epsilon;
    if (capacity > 0) spec.capacity_override = capacity;
    spec.seed = seed;
    try {
        spec.validate(loaded.model.size());
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    const PartitionResult result = partition(loaded.model, spec);

    nlohmann::json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["model"] = {{"path", model_args.path},
                    {"format", model_args.format},
                    {"n", loaded.model.size()}};
    doc["k"] = k;
    doc["epsilon"] = epsilon;
    doc["seed"] = seed;
    doc["cut_weight"] = result.cut_weight;
    doc["part_sizes"] = result.part_sizes;
    doc["assignment"] = result.assignment;
    std::filesystem::create_directories(out_dir);
    const auto path =
        (std::filesystem::path(out_dir) / "partition.json").string();
    atomic_write(path, doc.dump(2) + "\n");
    std::cout << "wrote " << path << " (cut weight "
              << format_double(result.cut_weight) << ")\n";
    return 0;
}

int run_illusion(const ModelArgs& model_args, const SamplerArgs& sampler_args,
                 const std::vector<int>& ks,
                 const std::vector<std::int64_t>& taus,
                 const std::string& mode, std::int64_t delay, double epsilon,
                 std::int64_t chip_capacity, double update_rate,
                 double active_power, double idle_power, double wakeup_latency,
                 double shutdown_latency, double message_overhead,
                 double payload_bytes, std::uint64_t seed,
                 const std::string& out_dir) {
    ExperimentConfig config;
    config.model_path = model_args.path;
    config.format = parse_format(model_args.format);
    config.threads = thread_count_from_env();
    config.sampler = make_sampler_config(sampler_args, seed, config.threads);
    config.partition_spec.epsilon = epsilon;
    if (chip_capacity > 0) {
        config.chip.capacity = chip_capacity;
        config.partition_spec.capacity_override = chip_capacity;
    }
    config.chip.update_rate = update_rate;
    config.chip.active_power = active_power;
    config.chip.idle_power = idle_power;
    config.chip.wakeup_latency = wakeup_latency;
    config.chip.shutdown_latency = shutdown_latency;
    config.interconnect.delivery_delay = delay;
    config.interconnect.per_message_overhead = message_overhead;
    config.interconnect.payload_bytes_per_spin = payload_bytes;
    config.mode = mode == "async" ? ScheduleMode::Asynchronous
                                  : ScheduleMode::Synchronous;
    config.k_grid = ks;
    config.tau_grid = taus;
    config.output_dir = out_dir;
    config.master_seed = seed;
    try {
        config.chip.validate();
        config.interconnect.validate();
        for (std::int64_t tau : taus) {
            if (tau < 1) throw ConfigError("--tau values must be >= 1");
        }
        for (int k : ks) {
            if (k < 1) throw ConfigError("--k values must be >= 1");
        }
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    const auto result = run_experiment(config);
    std::cout << "wrote " << result.report_path << ", " << result.metrics_path
              << ", " << result.sweep_energy_path << "\n";
    return 0;
}

int run_convert(const std::string& in_path, const std::string& in_format,
                const std::string& out_path) {
    const LoadedModel loaded = load_model(in_path, parse_format(in_format));
    save_model(loaded.model, out_path);
    std::cout << "wrote " << out_path << "\n";
    std::cout << "offset " << format_double(loaded.offset) << "\n";
    if (loaded.format == ModelFormat::Gset) {
        std::cout << "max-cut value = (offset - E) / 2\n";
    } else if (loaded.format == ModelFormat::Qubo) {
        std::cout << "qubo objective = E + offset\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "illusim: distributed p-bit/Ising sampling over capacity-limited "
        "virtual chips"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand(
        "sample", "Run a single-chip Gibbs sampling experiment");
    ModelArgs sample_model;
    SamplerArgs sample_sampler;
    std::uint64_t sample_seed = 0;
    std::string sample_out = "results/sample";
    add_model_options(sample, sample_model);
    add_sampler_options(sample, sample_sampler);
    sample->add_option("--seed", sample_seed, "Master seed");
    sample->add_option("--out", sample_out, "Output directory");

    // partition
    auto* part = app.add_subcommand(
        "partition", "Partition a problem graph across chips");
    ModelArgs part_model;
    int part_k = 2;
    double part_epsilon = 0.05;
    std::int64_t part_capacity = 0;
    std::uint64_t part_seed = 0;
    std::string part_out = "results/partition";
    add_model_options(part, part_model);
    part->add_option("--k", part_k, "Number of parts")->required();
    part->add_option("--epsilon", part_epsilon, "Balance slack");
    part->add_option("--capacity", part_capacity,
                     "Hard per-part spin cap (overrides epsilon bound)");
    part->add_option("--seed", part_seed, "Partitioner seed");
    part->add_option("--out", part_out, "Output directory");

    // illusion
    auto* illusion = app.add_subcommand(
        "illusion",
        "Compare partitioned multi-chip runs against the ideal single chip");
    ModelArgs ill_model;
    SamplerArgs ill_sampler;
    std::vector<int> ill_ks = {2};
    std::vector<std::int64_t> ill_taus = {1};
    std::string ill_mode = "sync";
    std::int64_t ill_delay = 0;
    double ill_epsilon = 0.05;
    std::int64_t ill_capacity = 0;
    double ill_update_rate = 1e10;
    double ill_active_power = 10.0;
    double ill_idle_power = 0.1;
    double ill_wakeup = 1e-6;
    double ill_shutdown = 1e-6;
    double ill_overhead = 0.0;
    double ill_payload = 1.0;
    std::uint64_t ill_seed = 0;
    std::string ill_out = "results/illusion";
    add_model_options(illusion, ill_model);
    add_sampler_options(illusion, ill_sampler, /*with_kernel=*/false);
    illusion->add_option("--k", ill_ks, "Chip counts (comma-separated)")
        ->delimiter(',');
    illusion
        ->add_option("--tau", ill_taus,
                     "Sweeps between boundary exchanges (comma-separated)")
        ->delimiter(',');
    illusion->add_option("--mode", ill_mode, "Schedule: sync or async")
        ->check(CLI::IsMember({"sync", "async"}));
    illusion->add_option("--delay", ill_delay,
                         "Delivery delay in sweeps (async)");
    illusion->add_option("--epsilon", ill_epsilon, "Partition balance slack");
    illusion->add_option("--chip-capacity", ill_capacity,
                         "Max resident p-bits per chip");
    illusion->add_option("--update-rate", ill_update_rate,
                         "Spin updates per second per chip");
    illusion->add_option("--active-power", ill_active_power,
                         "Active power per chip (W)");
    illusion->add_option("--idle-power", ill_idle_power,
                         "Idle power per chip (W)");
    illusion->add_option("--wakeup-latency", ill_wakeup,
                         "Wakeup latency (s)");
    illusion->add_option("--shutdown-latency", ill_shutdown,
                         "Shutdown latency (s)");
    illusion->add_option("--message-overhead", ill_overhead,
                         "Seconds per exchange round");
    illusion->add_option("--payload-bytes", ill_payload,
                         "Accounting bytes per boundary spin");
    illusion->add_option("--seed", ill_seed, "Master seed");
    illusion->add_option("--out", ill_out, "Output directory");

    // convert
    auto* convert = app.add_subcommand(
        "convert", "Convert gset/qubo instances to the native format");
    std::string convert_in;
    std::string convert_in_format = "gset";
    std::string convert_out;
    convert->add_option("--in", convert_in, "Input file")->required();
    convert->add_option("--in-format", convert_in_format,
                        "Input format: native, gset, or qubo")
        ->check(CLI::IsMember({"native", "gset", "qubo"}));
    convert->add_option("--out", convert_out, "Output native file")
        ->required();

    // plotdata
    auto* plotdata = app.add_subcommand(
        "plotdata", "Flatten experiment reports into plot-ready CSV tables");
    std::string plot_results;
    std::string plot_out = "results/plots";
    plotdata->add_option("--results", plot_results, "Results directory")
        ->required();
    plotdata->add_option("--out", plot_out, "Output directory");

    try {
        app.parse(argc, argv);
        if (sample->parsed()) {
            return run_sample(sample_model, sample_sampler, sample_seed,
                              sample_out);
        }
        if (part->parsed()) {
            return run_partition_cmd(part_model, part_k, part_epsilon,
                                     part_capacity, part_seed, part_out);
        }
        if (illusion->parsed()) {
            return run_illusion(ill_model, ill_sampler, ill_ks, ill_taus,
                                ill_mode, ill_delay, ill_epsilon, ill_capacity,
                                ill_update_rate, ill_active_power,
                                ill_idle_power, ill_wakeup, ill_shutdown,
                                ill_overhead, ill_payload, ill_seed, ill_out);
        }
        if (convert->parsed()) {
            return run_convert(convert_in, convert_in_format, convert_out);
        }
        if (plotdata->parsed()) {
            emit_plot_data(plot_results, plot_out);
            std::cout << "wrote plot tables to " << plot_out << "\n";
            return 0;
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ContractViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
}
