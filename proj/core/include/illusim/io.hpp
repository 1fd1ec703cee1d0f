#pragma once

#include <string>
#include <vector>

#include "illusim/model.hpp"

namespace illusim {

enum class ModelFormat { Native, Gset, Qubo };

/// Parses "native" | "gset" | "qubo"; throws ConfigError otherwise.
ModelFormat parse_format(const std::string& name);
std::string to_string(ModelFormat format);

/// A loaded model plus the constant that links its energies back to the
/// source objective:
///   native:  offset = 0
///   gset:    max-cut value = (offset - E) / 2, offset = total edge weight
///   qubo:    objective = E + offset
struct LoadedModel {
    IsingModel model;
    double offset = 0.0;
    ModelFormat format = ModelFormat::Native;
};

/// Native text format:
///   ising <n>
///   h <i> <value>
///   J <i> <j> <value>
/// Gset max-cut (1-indexed, antiferromagnetic mapping J = -w):
///   <n> <m>
///   <i> <j> <w>   (m lines)
/// QUBO (0-indexed, upper triangular i <= j):
///   qubo <n>
///   Q <i> <j> <value>
/// Blank lines and '#' comments are skipped. Malformed lines, duplicate
/// entries, and out-of-range indices raise ParseError with the line number.
LoadedModel load_model(const std::string& path, ModelFormat format);

/// Writes the native format; load_model(save_model(m)) == m exactly.
void save_model(const IsingModel& model, const std::string& path);

/// Upper-triangular QUBO matrix, sum_{i<=j} Q_ij x_i x_j over x in {0,1}^n.
struct QuboEntry {
    int i;
    int j;
    double value;
};
struct Qubo {
    int n = 0;
    std::vector<QuboEntry> entries;  // i <= j, unique
};

double qubo_value(const Qubo& qubo, const std::vector<int>& x);

struct QuboIsingMap {
    IsingModel model;
    double offset = 0.0;
};

/// Substitutes x_i = (1+s_i)/2: J_ij = -Q_ij/4, h_i = -(Q_ii/2 +
/// sum_{j!=i} Q_ij/4), offset = sum_i Q_ii/2 + sum_{i<j} Q_ij/4, so the
/// QUBO objective equals energy(s) + offset for every assignment.
QuboIsingMap qubo_to_ising(const Qubo& qubo);

/// Shortest round-trip decimal text for a double ("nan"/"inf" spelled out).
std::string format_double(double value);

/// Writes content to path atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

}  // namespace illusim
