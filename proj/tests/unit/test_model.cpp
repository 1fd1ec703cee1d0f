#include <doctest.h>

#include <cmath>
#include <limits>

#include "illusim/error.hpp"
#include "illusim/instances.hpp"
#include "illusim/model.hpp"
#include "illusim/rng.hpp"

using namespace illusim;

namespace {

SpinState make_state(std::initializer_list<int> spins) {
    SpinState s;
    for (int v : spins) s.push_back(static_cast<std::int8_t>(v));
    return s;
}

SpinState random_state(int n, std::uint64_t seed) {
    SpinState s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] =
            uniform_draw(seed, static_cast<std::uint64_t>(i), 99) < 0.5
                ? std::int8_t{-1}
                : std::int8_t{1};
    }
    return s;
}

}  // namespace

TEST_CASE("model construction enforces invariants") {
    CHECK_THROWS_AS(IsingModel(0), ContractViolation);
    IsingModel m(3);
    CHECK_THROWS_AS(m.add_coupling(1, 1, 1.0), ContractViolation);
    CHECK_THROWS_AS(m.add_coupling(0, 3, 1.0), ContractViolation);
    CHECK_THROWS_AS(m.add_coupling(-1, 0, 1.0), ContractViolation);
    CHECK_THROWS_AS(
        m.add_coupling(0, 1, std::numeric_limits<double>::quiet_NaN()),
        ContractViolation);
    m.add_coupling(0, 1, 2.0);
    CHECK_THROWS_AS(m.add_coupling(1, 0, 0.5), ContractViolation);
    CHECK(m.coupling(0, 1) == 2.0);
    CHECK(m.coupling(1, 0) == 2.0);
    CHECK(m.coupling(0, 2) == 0.0);
    CHECK_THROWS_AS(m.set_bias(3, 0.1), ContractViolation);
    CHECK_THROWS_AS(m.set_bias(0, std::numeric_limits<double>::infinity()),
                    ContractViolation);
}

TEST_CASE("energy matches hand-computed values") {
    SUBCASE("single free spin") {
        IsingModel m(1);
        CHECK(energy(m, make_state({1})) == 0.0);
    }
    SUBCASE("single aligned bond") {
        IsingModel m(2);
        m.add_coupling(0, 1, 1.0);
        CHECK(energy(m, make_state({1, 1})) == -1.0);
    }
    SUBCASE("frustrated triangle") {
        IsingModel m(3);
        m.add_coupling(0, 1, 1.0);
        m.add_coupling(0, 2, 1.0);
        m.add_coupling(1, 2, 1.0);
        CHECK(energy(m, make_state({1, 1, -1})) == 1.0);
    }
    SUBCASE("dimension mismatch") {
        IsingModel m(2);
        CHECK_THROWS_AS(energy(m, make_state({1})), ContractViolation);
    }
}

TEST_CASE("local field values and the energy-difference identity") {
    SUBCASE("isolated spin sees its bias") {
        IsingModel m(2);
        m.set_bias(0, 0.7);
        CHECK(local_field(m, make_state({1, 1}), 0) == 0.7);
    }
    SUBCASE("single neighbor") {
        IsingModel m(2);
        m.add_coupling(0, 1, 2.0);
        CHECK(local_field(m, make_state({1, -1}), 0) == -2.0);
    }
    SUBCASE("index out of range") {
        IsingModel m(2);
        CHECK_THROWS_AS(local_field(m, make_state({1, 1}), 2),
                        ContractViolation);
    }
    SUBCASE("flip identity on random models") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const IsingModel m = make_random_model(
                8, seed, {.density = 0.5, .coupling_scale = 1.0,
                          .bias_scale = 0.5});
            SpinState s = random_state(8, seed);
            for (int i = 0; i < 8; ++i) {
                SpinState up = s;
                up[static_cast<std::size_t>(i)] = 1;
                SpinState down = s;
                down[static_cast<std::size_t>(i)] = -1;
                const double identity =
                    energy(m, down) - energy(m, up);
                CHECK(std::abs(identity - 2.0 * local_field(m, s, i)) < 1e-12);
            }
        }
    }
}

TEST_CASE("global spin-flip symmetry at zero bias") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const IsingModel m = make_random_model(
            12, seed, {.density = 0.4, .coupling_scale = 1.0});
        SpinState s = random_state(12, seed + 100);
        SpinState flipped = s;
        for (auto& v : flipped) v = static_cast<std::int8_t>(-v);
        CHECK(energy(m, s) == doctest::Approx(energy(m, flipped)).epsilon(1e-12));
    }
}

TEST_CASE("state index encoding round-trips") {
    const SpinState s = make_state({1, -1, -1, 1, 1});
    CHECK(state_index(s) == 0b11001u);
    CHECK(state_from_index(state_index(s), 5) == s);
    for (std::uint32_t idx = 0; idx < 32; ++idx) {
        CHECK(state_index(state_from_index(idx, 5)) == idx);
    }
}

TEST_CASE("exact_boltzmann") {
    SUBCASE("single unbiased spin is a fair coin") {
        IsingModel m(1);
        const auto dist = exact_boltzmann(m, 2.0);
        CHECK(dist.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dist.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("two-spin ferromagnet closed form") {
        IsingModel m(2);
        m.add_coupling(0, 1, 1.0);
        const auto dist = exact_boltzmann(m, 1.0);
        const double e = std::exp(1.0);
        const double z = 2.0 * e + 2.0 / e;
        // states: 00 (--), 01 (+-), 10 (-+), 11 (++)
        CHECK(dist.probabilities[0b00] == doctest::Approx(e / z).epsilon(1e-12));
        CHECK(dist.probabilities[0b11] == doctest::Approx(e / z).epsilon(1e-12));
        CHECK(dist.probabilities[0b01] ==
              doctest::Approx(1.0 / (e * z)).epsilon(1e-12));
        CHECK(dist.probabilities[0b10] ==
              doctest::Approx(1.0 / (e * z)).epsilon(1e-12));
        CHECK(dist.probabilities[0b11] == doctest::Approx(0.44040).epsilon(1e-4));
        CHECK(dist.probabilities[0b01] == doctest::Approx(0.05961).epsilon(1e-3));
    }
    SUBCASE("hot limit is uniform") {
        const IsingModel m = make_random_model(
            6, 3, {.density = 0.5, .coupling_scale = 1.0, .bias_scale = 1.0});
        const auto dist = exact_boltzmann(m, 1e-9);
        for (double p : dist.probabilities) {
            CHECK(p == doctest::Approx(1.0 / 64.0).epsilon(1e-6));
        }
    }
    SUBCASE("normalization") {
        const IsingModel m = make_random_model(
            10, 4, {.density = 0.3, .coupling_scale = 1.0, .bias_scale = 0.3});
        const auto dist = exact_boltzmann(m, 0.7);
        double sum = 0.0;
        for (double p : dist.probabilities) {
            REQUIRE(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    SUBCASE("energy shift leaves the distribution unchanged") {
        const IsingModel m = make_random_model(
            8, 5, {.density = 0.4, .coupling_scale = 1.0, .bias_scale = 0.2});
        auto energies = enumerate_energies(m);
        const auto base = boltzmann_from_energies(energies, 0.8);
        for (auto& e : energies) e += 17.25;
        const auto shifted = boltzmann_from_energies(energies, 0.8);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(base[i] == doctest::Approx(shifted[i]).epsilon(1e-9));
        }
    }
    SUBCASE("capacity cap") {
        CHECK_THROWS_AS(exact_boltzmann(IsingModel(25), 1.0), CapacityError);
    }
}

TEST_CASE("ground_states") {
    SUBCASE("two-spin ferromagnet has the two aligned states") {
        IsingModel m(2);
        m.add_coupling(0, 1, 1.0);
        const auto gs = ground_states(m);
        CHECK(gs.energy == -1.0);
        REQUIRE(gs.states.size() == 2);
        CHECK(state_index(gs.states[0]) == 0b00u);
        CHECK(state_index(gs.states[1]) == 0b11u);
    }
    SUBCASE("antiferromagnetic triangle is six-fold degenerate") {
        IsingModel m(3);
        m.add_coupling(0, 1, -1.0);
        m.add_coupling(0, 2, -1.0);
        m.add_coupling(1, 2, -1.0);
        const auto gs = ground_states(m);
        CHECK(gs.energy == -1.0);
        CHECK(gs.states.size() == 6);
    }
    SUBCASE("biased single spin") {
        IsingModel m(1);
        m.set_bias(0, 5.0);
        const auto gs = ground_states(m);
        CHECK(gs.energy == -5.0);
        REQUIRE(gs.states.size() == 1);
        CHECK(gs.states[0][0] == 1);
    }
    SUBCASE("capacity cap") {
        CHECK_THROWS_AS(ground_states(IsingModel(25)), CapacityError);
    }
}
