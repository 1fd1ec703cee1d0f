#include "illusim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "illusim/error.hpp"

namespace illusim {

ModelFormat parse_format(const std::string& name) {
    if (name == "native") return ModelFormat::Native;
    if (name == "gset") return ModelFormat::Gset;
    if (name == "qubo") return ModelFormat::Qubo;
    throw ConfigError("unknown model format '" + name +
                      "' (expected native, gset, or qubo)");
}

std::string to_string(ModelFormat format) {
    switch (format) {
        case ModelFormat::Native: return "native";
        case ModelFormat::Gset: return "gset";
        case ModelFormat::Qubo: return "qubo";
    }
    return "native";
}

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& message) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + message);
}

std::vector<Line> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream stream(raw);
        Line line;
        line.number = number;
        std::string token;
        while (stream >> token) line.tokens.push_back(token);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

int parse_int(const std::string& path, const Line& line,
              const std::string& token) {
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        parse_fail(path, line.number, "expected integer, got '" + token + "'");
    }
    return value;
}

double parse_real(const std::string& path, const Line& line,
                  const std::string& token) {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        parse_fail(path, line.number, "expected number, got '" + token + "'");
    }
    if (!std::isfinite(value)) {
        parse_fail(path, line.number, "value must be finite");
    }
    return value;
}

void check_spin_index(const std::string& path, const Line& line, int i,
                      int n) {
    if (i < 0 || i >= n) {
        parse_fail(path, line.number,
                   "spin index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(n) + ")");
    }
}

LoadedModel load_native(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) {
        throw ParseError(path + ":1: empty file, expected 'ising <n>' header");
    }
    const Line& header = lines.front();
    if (header.tokens.size() != 2 || header.tokens[0] != "ising") {
        parse_fail(path, header.number, "expected header 'ising <n>'");
    }
    const int n = parse_int(path, header, header.tokens[1]);
    if (n <= 0) {
        parse_fail(path, header.number, "spin count must be positive");
    }
    IsingModel model(n);
    std::set<std::pair<int, int>> seen_couplings;
    std::set<int> seen_biases;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const Line& line = lines[l];
        if (line.tokens[0] == "h") {
            if (line.tokens.size() != 3) {
                parse_fail(path, line.number, "expected 'h <i> <value>'");
            }
            const int i = parse_int(path, line, line.tokens[1]);
            check_spin_index(path, line, i, n);
            if (!seen_biases.insert(i).second) {
                parse_fail(path, line.number,
                           "duplicate bias for spin " + std::to_string(i));
            }
            model.set_bias(i, parse_real(path, line, line.tokens[2]));
        } else if (line.tokens[0] == "J") {
            if (line.tokens.size() != 4) {
                parse_fail(path, line.number, "expected 'J <i> <j> <value>'");
            }
            int i = parse_int(path, line, line.tokens[1]);
            int j = parse_int(path, line, line.tokens[2]);
            check_spin_index(path, line, i, n);
            check_spin_index(path, line, j, n);
            if (i == j) {
                parse_fail(path, line.number, "self-coupling not allowed");
            }
            if (i > j) std::swap(i, j);
            if (!seen_couplings.insert({i, j}).second) {
                parse_fail(path, line.number,
                           "duplicate coupling (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
            }
            model.add_coupling(i, j, parse_real(path, line, line.tokens[3]));
        } else {
            parse_fail(path, line.number,
                       "unknown directive '" + line.tokens[0] + "'");
        }
    }
    return {std::move(model), 0.0, ModelFormat::Native};
}

LoadedModel load_gset(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) {
        throw ParseError(path + ":1: empty file, expected '<n> <m>' header");
    }
    const Line& header = lines.front();
    if (header.tokens.size() != 2) {
        parse_fail(path, header.number, "expected header '<n> <m>'");
    }
    const int n = parse_int(path, header, header.tokens[0]);
    const int m = parse_int(path, header, header.tokens[1]);
    if (n <= 0 || m < 0) {
        parse_fail(path, header.number, "invalid node or edge count");
    }
    if (static_cast<int>(lines.size()) - 1 != m) {
        parse_fail(path, header.number,
                   "header announces " + std::to_string(m) + " edges but " +
                       std::to_string(lines.size() - 1) + " follow");
    }
    IsingModel model(n);
    std::set<std::pair<int, int>> seen;
    double total_weight = 0.0;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const Line& line = lines[l];
        if (line.tokens.size() != 3) {
            parse_fail(path, line.number, "expected '<i> <j> <w>'");
        }
        int i = parse_int(path, line, line.tokens[0]);
        int j = parse_int(path, line, line.tokens[1]);
        const double w = parse_real(path, line, line.tokens[2]);
        if (i < 1 || i > n || j < 1 || j > n) {
            parse_fail(path, line.number,
                       "vertex index out of range [1, " + std::to_string(n) +
                           "]");
        }
        if (i == j) {
            parse_fail(path, line.number, "self-loop not allowed");
        }
        --i;
        --j;
        if (i > j) std::swap(i, j);
        if (!seen.insert({i, j}).second) {
            parse_fail(path, line.number,
                       "duplicate edge (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ")");
        }
        // Max-cut as ground-state search: misaligned endpoints must be
        // rewarded, hence the antiferromagnetic sign.
        model.add_coupling(i, j, -w);
        total_weight += w;
    }
    return {std::move(model), total_weight, ModelFormat::Gset};
}

LoadedModel load_qubo(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) {
        throw ParseError(path + ":1: empty file, expected 'qubo <n>' header");
    }
    const Line& header = lines.front();
    if (header.tokens.size() != 2 || header.tokens[0] != "qubo") {
        parse_fail(path, header.number, "expected header 'qubo <n>'");
    }
    const int n = parse_int(path, header, header.tokens[1]);
    if (n <= 0) {
        parse_fail(path, header.number, "variable count must be positive");
    }
    Qubo qubo;
    qubo.n = n;
    std::set<std::pair<int, int>> seen;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const Line& line = lines[l];
        if (line.tokens.size() != 4 || line.tokens[0] != "Q") {
            parse_fail(path, line.number, "expected 'Q <i> <j> <value>'");
        }
        const int i = parse_int(path, line, line.tokens[1]);
        const int j = parse_int(path, line, line.tokens[2]);
        check_spin_index(path, line, i, n);
        check_spin_index(path, line, j, n);
        if (i > j) {
            parse_fail(path, line.number,
                       "entries must be upper-triangular (i <= j)");
        }
        if (!seen.insert({i, j}).second) {
            parse_fail(path, line.number,
                       "duplicate entry Q(" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
        }
        qubo.entries.push_back({i, j, parse_real(path, line, line.tokens[3])});
    }
    auto mapped = qubo_to_ising(qubo);
    return {std::move(mapped.model), mapped.offset, ModelFormat::Qubo};
}

}  // namespace

LoadedModel load_model(const std::string& path, ModelFormat format) {
    switch (format) {
        case ModelFormat::Native: return load_native(path);
        case ModelFormat::Gset: return load_gset(path);
        case ModelFormat::Qubo: return load_qubo(path);
    }
    throw ConfigError("unknown model format");
}

void save_model(const IsingModel& model, const std::string& path) {
    std::string out = "ising " + std::to_string(model.size()) + "\n";
    const auto& biases = model.biases();
    for (std::size_t i = 0; i < biases.size(); ++i) {
        if (biases[i] != 0.0) {
            out += "h " + std::to_string(i) + " " + format_double(biases[i]) +
                   "\n";
        }
    }
    std::vector<Coupling> couplings = model.couplings();
    std::sort(couplings.begin(), couplings.end(),
              [](const Coupling& a, const Coupling& b) {
                  return std::pair{a.i, a.j} < std::pair{b.i, b.j};
              });
    for (const auto& c : couplings) {
        out += "J " + std::to_string(c.i) + " " + std::to_string(c.j) + " " +
               format_double(c.weight) + "\n";
    }
    atomic_write(path, out);
}

double qubo_value(const Qubo& qubo, const std::vector<int>& x) {
    if (static_cast<int>(x.size()) != qubo.n) {
        throw ContractViolation("assignment length does not match QUBO size");
    }
    double value = 0.0;
    for (const auto& entry : qubo.entries) {
        value += entry.value * x[static_cast<std::size_t>(entry.i)] *
                 x[static_cast<std::size_t>(entry.j)];
    }
    return value;
}

QuboIsingMap qubo_to_ising(const Qubo& qubo) {
    if (qubo.n <= 0) {
        throw ContractViolation("QUBO must have at least one variable");
    }
    IsingModel model(qubo.n);
    std::vector<double> h(static_cast<std::size_t>(qubo.n), 0.0);
    double offset = 0.0;
    for (const auto& entry : qubo.entries) {
        if (entry.i < 0 || entry.j < entry.i || entry.j >= qubo.n) {
            throw ContractViolation("QUBO entries must satisfy 0 <= i <= j < n");
        }
        if (!std::isfinite(entry.value)) {
            throw ContractViolation("QUBO entries must be finite");
        }
        if (entry.i == entry.j) {
            // Q_ii x_i^2 = Q_ii x_i = Q_ii (1 + s_i) / 2
            h[static_cast<std::size_t>(entry.i)] -= entry.value / 2.0;
            offset += entry.value / 2.0;
        } else {
            if (entry.value != 0.0) {
                model.add_coupling(entry.i, entry.j, -entry.value / 4.0);
            }
            h[static_cast<std::size_t>(entry.i)] -= entry.value / 4.0;
            h[static_cast<std::size_t>(entry.j)] -= entry.value / 4.0;
            offset += entry.value / 4.0;
        }
    }
    for (int i = 0; i < qubo.n; ++i) {
        if (h[static_cast<std::size_t>(i)] != 0.0) {
            model.set_bias(i, h[static_cast<std::size_t>(i)]);
        }
    }
    return {std::move(model), offset};
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + temp.string() + "'");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw IoError("failed writing '" + temp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        throw IoError("cannot rename '" + temp.string() + "' to '" +
                      target.string() + "': " + ec.message());
    }
}

}  // namespace illusim
