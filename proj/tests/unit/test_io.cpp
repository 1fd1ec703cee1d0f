#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "illusim/error.hpp"
#include "illusim/instances.hpp"
#include "illusim/io.hpp"
#include "illusim/model.hpp"
#include "illusim/rng.hpp"

using namespace illusim;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("illusim_io_test_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const {
        return (path_ / name).string();
    }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

std::string write_file(const TempDir& dir, const std::string& name,
                       const std::string& content) {
    const std::string path = dir.file(name);
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("native format") {
    TempDir dir;
    SUBCASE("single biased spin") {
        const auto path = write_file(dir, "one.ising", "ising 1\nh 0 0.5\n");
        const auto loaded = load_model(path, ModelFormat::Native);
        CHECK(loaded.model.size() == 1);
        CHECK(loaded.model.bias(0) == 0.5);
        CHECK(loaded.offset == 0.0);
    }
    SUBCASE("comments and blank lines are skipped") {
        const auto path = write_file(
            dir, "c.ising", "# comment\nising 2\n\nJ 0 1 -1.5 # inline\n");
        const auto loaded = load_model(path, ModelFormat::Native);
        CHECK(loaded.model.coupling(0, 1) == -1.5);
    }
    SUBCASE("duplicate coupling reports the line") {
        const auto path = write_file(
            dir, "dup.ising", "ising 2\nJ 0 1 1\nJ 1 0 2\n");
        CHECK_THROWS_WITH_AS(load_model(path, ModelFormat::Native),
                             doctest::Contains(":3:"), ParseError);
    }
    SUBCASE("malformed line reports the line") {
        const auto path =
            write_file(dir, "bad.ising", "ising 2\nJ 0 one 1\n");
        CHECK_THROWS_WITH_AS(load_model(path, ModelFormat::Native),
                             doctest::Contains(":2:"), ParseError);
    }
    SUBCASE("index out of range") {
        const auto path = write_file(dir, "oor.ising", "ising 2\nh 2 1.0\n");
        CHECK_THROWS_AS(load_model(path, ModelFormat::Native), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_model(dir.file("nope.ising"), ModelFormat::Native),
                        IoError);
    }
    SUBCASE("round trip preserves the model exactly") {
        const IsingModel original = make_random_model(
            12, 5, {.density = 0.4, .coupling_scale = 1.3, .bias_scale = 0.7});
        const auto path = dir.file("round.ising");
        save_model(original, path);
        const auto loaded = load_model(path, ModelFormat::Native);
        CHECK(loaded.model == original);
    }
}

TEST_CASE("gset format") {
    TempDir dir;
    SUBCASE("edges map to antiferromagnetic couplings") {
        const auto path = write_file(dir, "g.gset", "2 1\n1 2 1\n");
        const auto loaded = load_model(path, ModelFormat::Gset);
        CHECK(loaded.model.size() == 2);
        CHECK(loaded.model.coupling(0, 1) == -1.0);
        CHECK(loaded.model.bias(0) == 0.0);
        CHECK(loaded.offset == 1.0);  // total edge weight
    }
    SUBCASE("max-cut value recoverable from the offset") {
        // triangle with weights 1,2,3: best cut = 5
        const auto path =
            write_file(dir, "t.gset", "3 3\n1 2 1\n1 3 2\n2 3 3\n");
        const auto loaded = load_model(path, ModelFormat::Gset);
        const auto gs = ground_states(loaded.model);
        CHECK((loaded.offset - gs.energy) / 2.0 == 5.0);
    }
    SUBCASE("edge count mismatch") {
        const auto path = write_file(dir, "m.gset", "3 2\n1 2 1\n");
        CHECK_THROWS_AS(load_model(path, ModelFormat::Gset), ParseError);
    }
    SUBCASE("duplicate edge") {
        const auto path = write_file(dir, "d.gset", "3 2\n1 2 1\n2 1 4\n");
        CHECK_THROWS_WITH_AS(load_model(path, ModelFormat::Gset),
                             doctest::Contains(":3:"), ParseError);
    }
    SUBCASE("indices are 1-based") {
        const auto path = write_file(dir, "z.gset", "2 1\n0 1 1\n");
        CHECK_THROWS_AS(load_model(path, ModelFormat::Gset), ParseError);
    }
}

TEST_CASE("qubo format and mapping") {
    TempDir dir;
    SUBCASE("single-variable quadratic prefers x = 0") {
        const auto path = write_file(dir, "q.qubo", "qubo 1\nQ 0 0 1\n");
        const auto loaded = load_model(path, ModelFormat::Qubo);
        const auto gs = ground_states(loaded.model);
        REQUIRE(gs.states.size() == 1);
        CHECK(gs.states[0][0] == -1);  // s = -1 <=> x = 0
        CHECK(gs.energy + loaded.offset == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("zero matrix maps to the free model") {
        const auto path = write_file(dir, "z.qubo", "qubo 3\n");
        const auto loaded = load_model(path, ModelFormat::Qubo);
        CHECK(loaded.model.couplings().empty());
        CHECK(loaded.offset == 0.0);
        for (int i = 0; i < 3; ++i) CHECK(loaded.model.bias(i) == 0.0);
    }
    SUBCASE("lower-triangular entries are rejected") {
        const auto path = write_file(dir, "lt.qubo", "qubo 2\nQ 1 0 1\n");
        CHECK_THROWS_AS(load_model(path, ModelFormat::Qubo), ParseError);
    }
    SUBCASE("exhaustive objective equivalence on random instances") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Qubo qubo;
            qubo.n = 6;
            for (int i = 0; i < 6; ++i) {
                for (int j = i; j < 6; ++j) {
                    const auto stream = static_cast<std::uint64_t>(i * 6 + j);
                    const double u = uniform_draw(seed, stream, 0);
                    if (u < 0.5) continue;
                    qubo.entries.push_back(
                        {i, j, 4.0 * (uniform_draw(seed, stream, 1) - 0.5)});
                }
            }
            const auto mapped = qubo_to_ising(qubo);
            for (std::uint32_t bits = 0; bits < 64; ++bits) {
                std::vector<int> x(6);
                SpinState s(6);
                for (int i = 0; i < 6; ++i) {
                    x[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
                    s[static_cast<std::size_t>(i)] =
                        x[static_cast<std::size_t>(i)] == 1 ? std::int8_t{1}
                                                            : std::int8_t{-1};
                }
                const double direct = qubo_value(qubo, x);
                const double via_ising =
                    energy(mapped.model, s) + mapped.offset;
                CHECK(std::abs(direct - via_ising) < 1e-9);
            }
        }
    }
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 1e-300, 3.141592653589793}) {
        const std::string text = format_double(v);
        CHECK(std::stod(text) == v);
    }
}

TEST_CASE("atomic_write leaves no temp file behind") {
    TempDir dir;
    const auto path = dir.file("out.txt");
    atomic_write(path, "payload");
    std::ifstream in(path);
    std::string content;
    std::getline(in, content);
    CHECK(content == "payload");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}

TEST_CASE("parse_format") {
    CHECK(parse_format("native") == ModelFormat::Native);
    CHECK(parse_format("gset") == ModelFormat::Gset);
    CHECK(parse_format("qubo") == ModelFormat::Qubo);
    CHECK_THROWS_AS(parse_format("csv"), ConfigError);
}
