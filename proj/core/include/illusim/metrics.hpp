#pragma once

#include <cstdint>
#include <vector>

#include "illusim/model.hpp"
#include "illusim/sampler.hpp"

namespace illusim {

/// Accuracy and performance summary of one run against the exact oracle
/// and the single-chip reference.
struct ComparisonReport {
    double tv_distance = 0.0;
    double kl_divergence = 0.0;
    double autocorrelation_time = 0.0;
    bool autocorrelation_flagged = false;  // zero-variance energy series
    double best_energy = 0.0;
    double ground_state_probability = 0.0;
    double throughput_ratio_vs_ideal = 1.0;
    bool has_exact_reference = false;
};

/// Counts normalized to a probability vector. Throws if the total is zero.
std::vector<double> normalize_histogram(const std::vector<std::uint64_t>& counts);

/// (1/2) sum |p_i - q_i| for histograms over the same support.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

/// sum p_i ln(p_i / q_i), with 0 ln 0 = 0. Throws if q_i = 0 where p_i > 0.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

struct AutocorrelationResult {
    double time = 0.5;          // integrated autocorrelation time, >= 0.5
    bool zero_variance = false; // constant series flag
    std::int64_t window = 0;    // lag at which the windowed sum stopped
};

/// Integrated autocorrelation time with the standard windowed sum: the
/// window is the first lag W with c * tau(W) <= W. Requires length >= 100.
AutocorrelationResult autocorrelation_time(const std::vector<double>& series,
                                           double window_constant = 5.0);

/// Fraction of recorded post-burn-in samples that sit in the ground set.
double ground_state_probability(const SampleTrace& trace,
                                const std::vector<SpinState>& ground_set);

}  // namespace illusim
