#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "illusim/error.hpp"
#include "illusim/experiment.hpp"
#include "illusim/instances.hpp"
#include "illusim/io.hpp"

using namespace illusim;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("illusim_exp_test_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string sub(const std::string& name) const {
        return (path_ / name).string();
    }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ExperimentConfig base_config(const TempDir& dir, const std::string& out) {
    static int model_id = 0;
    const std::string model_path =
        dir.sub("model_" + std::to_string(model_id++) + ".ising");
    save_model(make_random_model(10, 3,
                                 {.density = 0.3,
                                  .coupling_scale = 2.0,
                                  .bias_scale = 0.3}),
               model_path);
    ExperimentConfig config;
    config.model_path = model_path;
    config.format = ModelFormat::Native;
    config.sampler.kernel = Kernel::ChromaticGibbs;
    config.sampler.schedule = BetaSchedule::constant(0.5);
    config.sampler.sweeps = 4000;
    config.sampler.burnin = 400;
    config.sampler.seed = 11;
    config.output_dir = dir.sub(out);
    config.master_seed = 11;
    return config;
}

std::vector<std::string> csv_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("run_experiment is byte-deterministic") {
    TempDir dir;
    auto config = base_config(dir, "a");
    config.k_grid = {2};
    config.tau_grid = {2};
    const auto first = run_experiment(config);
    const std::string metrics_a = read_file(first.metrics_path);
    const std::string report_a = read_file(first.report_path);
    config.output_dir = dir.sub("b");
    const auto second = run_experiment(config);
    CHECK(metrics_a == read_file(second.metrics_path));
    CHECK(report_a == read_file(second.report_path));
}

TEST_CASE("k=1 grid point reproduces the ideal row") {
    TempDir dir;
    auto config = base_config(dir, "k1");
    config.k_grid = {1};
    config.tau_grid = {1};
    const auto result = run_experiment(config);
    REQUIRE(result.rows.size() == 2);
    const auto& ideal = result.rows[0];
    const auto& partitioned = result.rows[1];
    CHECK(ideal.mode == "ideal");
    CHECK(partitioned.k == 1);
    CHECK(partitioned.tv == ideal.tv);
    CHECK(partitioned.kl == ideal.kl);
    CHECK(partitioned.best_energy == ideal.best_energy);
    CHECK(partitioned.messages == 0);
}

TEST_CASE("tau grid emits one row per tau") {
    TempDir dir;
    auto config = base_config(dir, "grid");
    config.mode = ScheduleMode::Asynchronous;
    config.interconnect.delivery_delay = 1;
    config.k_grid = {2};
    config.tau_grid = {1, 2, 4};
    const auto result = run_experiment(config);
    REQUIRE(result.rows.size() == 4);  // ideal + 3 taus
    CHECK(result.rows[1].tau == 1);
    CHECK(result.rows[2].tau == 2);
    CHECK(result.rows[3].tau == 4);
    const auto lines = csv_lines(read_file(result.metrics_path));
    CHECK(lines.size() == 5);  // header + 4 rows
    CHECK(lines[0] ==
          "mode,k,tau,delay,tv,kl,best_energy,wall_time_s,energy_proxy_j,"
          "messages");
}

TEST_CASE("sweep_energy.csv has one line per sweep per run") {
    TempDir dir;
    auto config = base_config(dir, "sweeps");
    config.sampler.sweeps = 50;
    config.sampler.burnin = 5;
    config.k_grid = {2};
    const auto result = run_experiment(config);
    const auto lines = csv_lines(read_file(result.sweep_energy_path));
    CHECK(lines.size() == 1 + 2 * 50);
    CHECK(lines[0] == "run,sweep,energy");
    CHECK(lines[1].rfind("ideal,1,", 0) == 0);
}

TEST_CASE("emit_plot_data") {
    TempDir dir;
    SUBCASE("missing results directory") {
        CHECK_THROWS_AS(emit_plot_data(dir.sub("nope"), dir.sub("plots")),
                        IoError);
        CHECK_FALSE(std::filesystem::exists(dir.sub("plots")));
    }
    SUBCASE("empty results directory writes nothing") {
        std::filesystem::create_directories(dir.sub("empty"));
        CHECK_THROWS_AS(emit_plot_data(dir.sub("empty"), dir.sub("plots")),
                        IoError);
        CHECK_FALSE(std::filesystem::exists(dir.sub("plots")));
    }
    SUBCASE("a single run yields single-row tables") {
        auto config = base_config(dir, "single");
        config.sampler.sweeps = 200;
        config.sampler.burnin = 20;
        run_experiment(config);  // reference run only
        emit_plot_data(dir.sub("single"), dir.sub("single_plots"));
        for (const char* table :
             {"accuracy_vs_tau.csv", "walltime_vs_k.csv", "tv_vs_sweeps.csv"}) {
            const auto lines = csv_lines(
                read_file(dir.sub("single_plots") + "/" + table));
            CHECK(lines.size() == 2);  // header + one row
        }
    }
    SUBCASE("tau grid flattens into monotone-checkable tables") {
        auto config = base_config(dir, "exp");
        config.mode = ScheduleMode::Asynchronous;
        config.interconnect.delivery_delay = 1;
        config.k_grid = {2};
        config.tau_grid = {1, 2, 4};
        run_experiment(config);
        emit_plot_data(dir.sub("exp"), dir.sub("plots"));
        const auto accuracy =
            csv_lines(read_file(dir.sub("plots") + "/accuracy_vs_tau.csv"));
        CHECK(accuracy.size() == 5);  // header + ideal + 3 taus
        CHECK(accuracy[0] == "source,mode,k,tau,delay,sweeps,tv,kl");
        const auto walltime =
            csv_lines(read_file(dir.sub("plots") + "/walltime_vs_k.csv"));
        CHECK(walltime.size() == 5);
        const auto tv_sweeps =
            csv_lines(read_file(dir.sub("plots") + "/tv_vs_sweeps.csv"));
        CHECK(tv_sweeps.size() == 5);
    }
}

TEST_CASE("sequential kernel is honored for the reference run") {
    TempDir dir;
    auto config = base_config(dir, "seq");
    config.sampler.kernel = Kernel::SequentialGibbs;
    const auto result = run_experiment(config);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].mode == "ideal");
    CHECK(result.rows[0].has_exact);
}

TEST_CASE("stage names survive in propagated errors") {
    TempDir dir;
    auto config = base_config(dir, "stage");
    config.k_grid = {200};  // more parts than spins
    try {
        run_experiment(config);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("partition spec") !=
              std::string::npos);
    }
}

TEST_CASE("annealed experiments skip the exact comparison") {
    TempDir dir;
    auto config = base_config(dir, "anneal");
    config.sampler.schedule = BetaSchedule::geometric(0.1, 5.0);
    config.k_grid = {2};
    const auto result = run_experiment(config);
    CHECK_FALSE(result.rows[0].has_exact);
    const auto metrics = read_file(result.metrics_path);
    CHECK(metrics.find("nan") != std::string::npos);
}
