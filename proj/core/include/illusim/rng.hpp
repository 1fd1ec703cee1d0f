#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace illusim {

// Counter-based random numbers. Every uniform draw is a pure function of
// (seed, stream, counter), so any schedule that replays the same triples
// replays the same randomness, no matter how work is split across workers.
// Streams are keyed by spin id, counters by per-spin update count.

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& x, std::uint32_t k0,
                         std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

}  // namespace detail

/// Philox-4x32 with 10 rounds. Returns the encrypted counter block.
inline std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> counter, std::uint32_t key0,
    std::uint32_t key1) {
    for (int round = 0; round < 10; ++round) {
        detail::philox_round(counter, key0, key1);
        key0 += detail::kPhiloxW0;
        key1 += detail::kPhiloxW1;
    }
    return counter;
}

/// Uniform double in [0, 1), a pure function of (seed, stream, counter).
inline double uniform_draw(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
    const auto words = philox4x32_10(
        {static_cast<std::uint32_t>(counter),
         static_cast<std::uint32_t>(counter >> 32),
         static_cast<std::uint32_t>(stream),
         static_cast<std::uint32_t>(stream >> 32)},
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32));
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Derives an independent 64-bit seed from a master seed and a tag.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag) {
    const auto words = philox4x32_10(
        {static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
         0x5eedu, 0},
        static_cast<std::uint32_t>(master),
        static_cast<std::uint32_t>(master >> 32));
    return (static_cast<std::uint64_t>(words[2]) << 32) | words[3];
}

/// Per-spin counted streams with a global draw tally.
///
/// Counter 0 of every stream is reserved for drawing the initial state, so
/// update draws start at counter 1 and the tally counts update draws only.
class SpinRng {
public:
    SpinRng(std::uint64_t seed, int n)
        : seed_(seed), counters_(static_cast<std::size_t>(n), 1) {}

    /// Next uniform for `spin`; bumps the tally.
    double next(int spin) {
        ++draws_;
        return uniform_draw(seed_, static_cast<std::uint64_t>(spin),
                            counters_[static_cast<std::size_t>(spin)]++);
    }

    /// Like next() but without touching the shared tally; parallel color
    /// phases use this on disjoint spins and tally once per phase.
    double next_untallied(int spin) {
        return uniform_draw(seed_, static_cast<std::uint64_t>(spin),
                            counters_[static_cast<std::size_t>(spin)]++);
    }

    void add_draws(std::uint64_t count) { draws_ += count; }

    std::uint64_t draws() const { return draws_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter(int spin) const {
        return counters_[static_cast<std::size_t>(spin)];
    }

private:
    std::uint64_t seed_;
    std::vector<std::uint64_t> counters_;
    std::uint64_t draws_ = 0;
};

}  // namespace illusim
