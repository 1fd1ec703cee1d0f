#include <doctest.h>

#include <cmath>

#include "illusim/error.hpp"
#include "illusim/illusion.hpp"
#include "illusim/instances.hpp"
#include "illusim/metrics.hpp"
#include "illusim/partition.hpp"

using namespace illusim;

namespace {

PartitionResult manual_partition(const IsingModel& m,
                                 const std::vector<int>& assignment) {
    PartitionResult result;
    result.assignment = assignment;
    int k = 0;
    for (int p : assignment) k = std::max(k, p + 1);
    result.part_sizes.assign(static_cast<std::size_t>(k), 0);
    for (int p : assignment) ++result.part_sizes[static_cast<std::size_t>(p)];
    result.cut_weight = cut_weight(m, assignment);
    return result;
}

SamplerConfig chromatic_config(std::int64_t sweeps, std::uint64_t seed,
                               double beta = 0.5, std::int64_t burnin = 0) {
    SamplerConfig cfg;
    cfg.kernel = Kernel::ChromaticGibbs;
    cfg.schedule = BetaSchedule::constant(beta);
    cfg.sweeps = sweeps;
    cfg.burnin = burnin;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("build_system") {
    SUBCASE("single chip has empty ghost tables") {
        const IsingModel m = make_grid_model(3, 3);
        const auto part = manual_partition(m, std::vector<int>(9, 0));
        const auto sys = build_system(m, part, ChipConfig{},
                                      InterconnectConfig{},
                                      ScheduleMode::Synchronous);
        CHECK(sys.num_chips == 1);
        CHECK(sys.chips[0].ghost_spins.empty());
        CHECK(sys.channels.empty());
        CHECK(sys.directed_cut_pairs == 0);
    }
    SUBCASE("bisected 4x4 grid holds 8 spins and 4 ghosts per chip") {
        const IsingModel m = make_grid_model(4, 4);
        std::vector<int> rows(16, 0);
        for (int i = 8; i < 16; ++i) rows[static_cast<std::size_t>(i)] = 1;
        const auto part = manual_partition(m, rows);
        const auto sys = build_system(m, part, ChipConfig{},
                                      InterconnectConfig{},
                                      ScheduleMode::Synchronous);
        REQUIRE(sys.num_chips == 2);
        CHECK(sys.chips[0].local_spins.size() == 8);
        CHECK(sys.chips[1].local_spins.size() == 8);
        CHECK(sys.chips[0].ghost_spins == std::vector<int>{8, 9, 10, 11});
        CHECK(sys.chips[1].ghost_spins == std::vector<int>{4, 5, 6, 7});
        CHECK(sys.directed_cut_pairs == 2);
    }
    SUBCASE("capacity violations name the chip") {
        const IsingModel m = make_grid_model(3, 3);
        std::vector<int> lopsided(9, 0);
        lopsided[8] = 1;
        const auto part = manual_partition(m, lopsided);
        ChipConfig chip;
        chip.capacity = 7;
        CHECK_THROWS_WITH_AS(
            build_system(m, part, chip, InterconnectConfig{},
                         ScheduleMode::Synchronous),
            doctest::Contains("chip 0"), CapacityError);
    }
}

TEST_CASE("sync tau=1 is bit-identical to the ideal reference") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const IsingModel m = make_random_model(
            12, seed, {.density = 0.3, .coupling_scale = 1.5,
                       .bias_scale = 0.3});
        for (int k : {2, 3}) {
            PartitionSpec pspec;
            pspec.num_parts = k;
            pspec.epsilon = 0.3;
            pspec.seed = seed;
            const auto part = partition(m, pspec);
            InterconnectConfig net;
            net.exchange_interval = 1;
            const auto sys = build_system(m, part, ChipConfig{}, net,
                                          ScheduleMode::Synchronous);
            const auto cfg = chromatic_config(400, mix_seed(seed, 7), 0.6, 50);
            const RunReport distributed = sync_run(sys, cfg);
            const RunReport ideal = ideal_reference_run(m, cfg);
            CHECK(serialize(distributed.trace) == serialize(ideal.trace));
        }
    }
}

TEST_CASE("sync with stale ghosts still samples close to exact") {
    const IsingModel m = make_random_model(
        10, 3, {.density = 0.3, .coupling_scale = 2.0, .bias_scale = 0.3});
    PartitionSpec pspec;
    pspec.num_parts = 2;
    pspec.epsilon = 0.1;
    pspec.seed = 3;
    const auto part = partition(m, pspec);
    InterconnectConfig net;
    net.exchange_interval = 4;
    const auto sys =
        build_system(m, part, ChipConfig{}, net, ScheduleMode::Synchronous);
    const auto cfg = chromatic_config(200000, mix_seed(3, 500), 0.5, 10000);
    const RunReport report = sync_run(sys, cfg);
    const auto exact = exact_boltzmann(m, 0.5);
    const double tv = tv_distance(normalize_histogram(report.trace.histogram),
                                  exact.probabilities);
    CHECK(tv <= 0.05);
}

TEST_CASE("message accounting follows the closed-form count") {
    const IsingModel m = make_grid_model(4, 4);
    std::vector<int> rows(16, 0);
    for (int i = 8; i < 16; ++i) rows[static_cast<std::size_t>(i)] = 1;
    const auto part = manual_partition(m, rows);

    SUBCASE("tau=10 over 100 sweeps gives 10 rounds x 2 directed pairs") {
        InterconnectConfig net;
        net.exchange_interval = 10;
        const auto sys = build_system(m, part, ChipConfig{}, net,
                                      ScheduleMode::Synchronous);
        const RunReport report = sync_run(sys, chromatic_config(100, 5));
        CHECK(report.exchange_rounds == 10);
        CHECK(report.messages == 20);
        CHECK(report.messages ==
              report.exchange_rounds *
                  static_cast<std::uint64_t>(sys.directed_cut_pairs));
    }
    SUBCASE("tau=1 exchanges after every color phase") {
        InterconnectConfig net;
        net.exchange_interval = 1;
        const auto sys = build_system(m, part, ChipConfig{}, net,
                                      ScheduleMode::Synchronous);
        const RunReport report = sync_run(sys, chromatic_config(100, 5));
        CHECK(report.exchange_rounds == 200);  // 2 colors per sweep
        CHECK(report.messages == 400);
    }
    SUBCASE("boundary bytes scale with the payload setting") {
        InterconnectConfig net;
        net.exchange_interval = 10;
        net.payload_bytes_per_spin = 4.0;
        const auto sys = build_system(m, part, ChipConfig{}, net,
                                      ScheduleMode::Synchronous);
        const RunReport report = sync_run(sys, chromatic_config(100, 5));
        // each round both chips send their 4 boundary spins
        CHECK(report.boundary_bytes == 10 * 2 * 4 * 4.0);
    }
}

TEST_CASE("async with zero delay and tau=1 matches sync") {
    const IsingModel m = make_random_model(
        10, 4, {.density = 0.35, .coupling_scale = 1.0, .bias_scale = 0.2});
    PartitionSpec pspec;
    pspec.num_parts = 2;
    pspec.epsilon = 0.2;
    pspec.seed = 4;
    const auto part = partition(m, pspec);
    InterconnectConfig net;
    net.exchange_interval = 1;
    net.delivery_delay = 0;
    const auto sync_sys =
        build_system(m, part, ChipConfig{}, net, ScheduleMode::Synchronous);
    const auto async_sys =
        build_system(m, part, ChipConfig{}, net, ScheduleMode::Asynchronous);
    const auto cfg = chromatic_config(500, 77, 0.5, 100);
    CHECK(serialize(sync_run(sync_sys, cfg).trace) ==
          serialize(async_run(async_sys, cfg).trace));
}

TEST_CASE("async with delay and stale exchanges stays near the target") {
    const IsingModel m = make_random_model(
        10, 3, {.density = 0.3, .coupling_scale = 2.0, .bias_scale = 0.3});
    PartitionSpec pspec;
    pspec.num_parts = 2;
    pspec.epsilon = 0.1;
    pspec.seed = 3;
    const auto part = partition(m, pspec);
    InterconnectConfig net;
    net.exchange_interval = 2;
    net.delivery_delay = 2;
    const auto sys =
        build_system(m, part, ChipConfig{}, net, ScheduleMode::Asynchronous);
    const auto cfg = chromatic_config(400000, mix_seed(3, 500), 0.5, 10000);
    const RunReport report = async_run(sys, cfg);
    const auto exact = exact_boltzmann(m, 0.5);
    const double tv = tv_distance(normalize_histogram(report.trace.histogram),
                                  exact.probabilities);
    CHECK(tv <= 0.08);
}

TEST_CASE("conservation invariants") {
    const IsingModel m = make_random_model(
        14, 6, {.density = 0.3, .coupling_scale = 1.0, .bias_scale = 0.2});
    PartitionSpec pspec;
    pspec.num_parts = 3;
    pspec.epsilon = 0.3;
    pspec.seed = 6;
    const auto part = partition(m, pspec);
    InterconnectConfig net;
    net.exchange_interval = 3;
    const auto sys =
        build_system(m, part, ChipConfig{}, net, ScheduleMode::Synchronous);

    std::size_t local_total = 0;
    for (const auto& chip : sys.chips) local_total += chip.local_spins.size();
    CHECK(local_total == 14);

    const RunReport report = sync_run(sys, chromatic_config(250, 8));
    std::uint64_t chip_updates = 0;
    std::uint64_t chip_draws = 0;
    for (std::size_t c = 0; c < report.chip_updates.size(); ++c) {
        chip_updates += report.chip_updates[c];
        chip_draws += report.chip_draws[c];
    }
    CHECK(chip_updates == report.trace.attempted_updates);
    CHECK(chip_draws == report.trace.rng_draws);
    CHECK(report.trace.rng_draws == report.trace.attempted_updates);
    CHECK(report.messages ==
          report.exchange_rounds *
              static_cast<std::uint64_t>(sys.directed_cut_pairs));
}

TEST_CASE("distributed runs are independent of the worker count") {
    const IsingModel m = make_random_model(
        20, 9, {.density = 0.2, .coupling_scale = 1.0, .bias_scale = 0.2});
    PartitionSpec pspec;
    pspec.num_parts = 3;
    pspec.epsilon = 0.3;
    pspec.seed = 9;
    const auto part = partition(m, pspec);
    InterconnectConfig net;
    net.exchange_interval = 2;
    net.delivery_delay = 1;
    const auto sys =
        build_system(m, part, ChipConfig{}, net, ScheduleMode::Asynchronous);
    auto cfg = chromatic_config(300, 10, 0.7, 50);
    cfg.threads = 1;
    const RunReport serial = async_run(sys, cfg);
    cfg.threads = 4;
    const RunReport parallel = async_run(sys, cfg);
    CHECK(serialize(serial.trace) == serialize(parallel.trace));
    CHECK(serial.messages == parallel.messages);
}

TEST_CASE("uncoupled spins partition into chips with no channels") {
    IsingModel m(6);
    m.set_bias(0, 0.4);
    m.set_bias(3, -0.2);
    const auto part = manual_partition(m, {0, 0, 0, 1, 1, 1});
    const auto sys = build_system(m, part, ChipConfig{}, InterconnectConfig{},
                                  ScheduleMode::Synchronous);
    CHECK(sys.channels.empty());
    const auto cfg = chromatic_config(200, 6, 0.8, 20);
    const RunReport report = sync_run(sys, cfg);
    CHECK(report.messages == 0);
    const RunReport ideal = ideal_reference_run(m, cfg);
    CHECK(serialize(report.trace) == serialize(ideal.trace));
}

TEST_CASE("mode mismatches are rejected") {
    const IsingModel m = make_grid_model(2, 2);
    const auto part = manual_partition(m, {0, 0, 1, 1});
    const auto sync_sys = build_system(m, part, ChipConfig{},
                                       InterconnectConfig{},
                                       ScheduleMode::Synchronous);
    const auto async_sys = build_system(m, part, ChipConfig{},
                                        InterconnectConfig{},
                                        ScheduleMode::Asynchronous);
    const auto cfg = chromatic_config(10, 1);
    CHECK_THROWS_AS(async_run(sync_sys, cfg), ContractViolation);
    CHECK_THROWS_AS(sync_run(async_sys, cfg), ContractViolation);
}

TEST_CASE("ideal reference run") {
    const IsingModel m = make_grid_model(3, 3);
    const auto cfg = chromatic_config(1000, 3);
    const RunReport report = ideal_reference_run(m, cfg);
    CHECK(report.messages == 0);
    CHECK(report.exchange_rounds == 0);
    CHECK(report.num_chips == 1);
    // wall-time model: S*n / update_rate with the default 1e10/s
    CHECK(report.wall_time_s ==
          doctest::Approx(1000.0 * 9.0 / 1e10).epsilon(1e-12));

    // equal to a sync run over the trivial partition, byte for byte
    const auto part = manual_partition(m, std::vector<int>(9, 0));
    const auto sys = build_system(m, part, ChipConfig{}, InterconnectConfig{},
                                  ScheduleMode::Synchronous);
    const RunReport single = sync_run(sys, cfg);
    CHECK(serialize(single.trace) == serialize(report.trace));
}

TEST_CASE("account") {
    SUBCASE("one chip at the default rate and power") {
        RunReport report;
        report.kind = RunKind::Ideal;
        report.chip_updates = {1000000};
        report.trace.rng_draws = 1000000;
        report.trace.accepted_flips = 400000;
        report.exchange_rounds = 0;
        const auto acct = account(report, ChipConfig{}, InterconnectConfig{});
        CHECK(acct.wall_time_s == doctest::Approx(1e-4).epsilon(1e-12));
        CHECK(acct.energy_proxy_j == doctest::Approx(1e-3).epsilon(1e-12));
        CHECK(acct.effective_draws_per_s ==
              doctest::Approx(1e10).epsilon(1e-12));
    }
    SUBCASE("two balanced chips halve the wall time") {
        RunReport one;
        one.kind = RunKind::Partitioned;
        one.mode = ScheduleMode::Synchronous;
        one.tau = 4;
        one.chip_updates = {1000000};
        RunReport two = one;
        two.chip_updates = {500000, 500000};
        const auto one_acct = account(one, ChipConfig{}, InterconnectConfig{});
        const auto two_acct = account(two, ChipConfig{}, InterconnectConfig{});
        CHECK(two_acct.wall_time_s ==
              doctest::Approx(one_acct.wall_time_s / 2.0).epsilon(1e-12));
    }
    SUBCASE("message overhead trades wall time against tau") {
        const IsingModel m = make_grid_model(4, 4);
        std::vector<int> rows(16, 0);
        for (int i = 8; i < 16; ++i) rows[static_cast<std::size_t>(i)] = 1;
        const auto part = manual_partition(m, rows);
        InterconnectConfig slow;
        slow.per_message_overhead = 1e-6;
        slow.exchange_interval = 1;
        InterconnectConfig fast = slow;
        fast.exchange_interval = 10;
        const auto cfg = chromatic_config(100, 5);
        const auto sys_tau1 =
            build_system(m, part, ChipConfig{}, slow, ScheduleMode::Synchronous);
        const auto sys_tau10 =
            build_system(m, part, ChipConfig{}, fast, ScheduleMode::Synchronous);
        const RunReport r1 = sync_run(sys_tau1, cfg);
        const RunReport r10 = sync_run(sys_tau10, cfg);
        CHECK(r10.wall_time_s < r1.wall_time_s);
    }
    SUBCASE("wakeup and shutdown events are charged at active power") {
        RunReport report;
        report.kind = RunKind::Ideal;
        report.chip_updates = {1000000};
        report.wakeup_shutdown_events = 5;
        ChipConfig chip;  // 1e-6 s wakeup + 1e-6 s shutdown at 10 W
        const auto acct = account(report, chip, InterconnectConfig{});
        CHECK(acct.energy_proxy_j ==
              doctest::Approx(1e-3 + 5.0 * 2e-6 * 10.0).epsilon(1e-9));
    }
}
