#include "illusim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "illusim/error.hpp"

namespace illusim {

std::vector<double> normalize_histogram(
    const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) {
        throw ContractViolation("cannot normalize an empty histogram");
    }
    std::vector<double> probs(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return probs;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw ContractViolation("tv_distance: histograms have different "
                                "support sizes (" +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum += std::abs(p[i] - q[i]);
    }
    return 0.5 * sum;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw ContractViolation("kl_divergence: histograms have different "
                                "support sizes (" +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] <= 0.0) {
            throw ContractViolation(
                "kl_divergence: q is zero at index " + std::to_string(i) +
                " where p is positive");
        }
        sum += p[i] * std::log(p[i] / q[i]);
    }
    return sum;
}

AutocorrelationResult autocorrelation_time(const std::vector<double>& series,
                                           double window_constant) {
    const auto n = static_cast<std::int64_t>(series.size());
    if (n < 100) {
        throw ContractViolation("autocorrelation_time needs >= 100 samples, "
                                "got " +
                                std::to_string(n));
    }
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    double c0 = 0.0;
    for (double v : series) c0 += (v - mean) * (v - mean);
    c0 /= static_cast<double>(n);

    AutocorrelationResult result;
    if (c0 == 0.0) {
        result.zero_variance = true;
        result.time = 0.5;
        return result;
    }

    double tau = 0.5;
    std::int64_t lag = 0;
    const std::int64_t max_lag = n / 2;
    while (lag < max_lag) {
        ++lag;
        double ct = 0.0;
        for (std::int64_t t = 0; t < n - lag; ++t) {
            ct += (series[static_cast<std::size_t>(t)] - mean) *
                  (series[static_cast<std::size_t>(t + lag)] - mean);
        }
        ct /= static_cast<double>(n);
        tau += ct / c0;
        if (window_constant * tau <= static_cast<double>(lag)) break;
    }
    result.window = lag;
    result.time = std::max(tau, 0.5);
    return result;
}

double ground_state_probability(const SampleTrace& trace,
                                const std::vector<SpinState>& ground_set) {
    if (trace.recorded_samples == 0) {
        throw ContractViolation("trace has no recorded samples");
    }
    if (trace.histogram.empty()) {
        throw ContractViolation(
            "trace has no histogram (model too large for state recording)");
    }
    std::uint64_t hits = 0;
    for (const auto& s : ground_set) {
        hits += trace.histogram[state_index(s)];
    }
    return static_cast<double>(hits) /
           static_cast<double>(trace.recorded_samples);
}

}  // namespace illusim
