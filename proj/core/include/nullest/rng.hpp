#pragma once

#include <cstdint>
#include <initializer_list>

namespace nullest {

// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

// Folds a sequence of integers (seed, n, k, trial, ...) into one stream key.
std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts);

/*
 * Counter-based random stream. The i-th output is mix64(key + i * golden), so
 * any (key, position) pair is reproducible without touching other streams,
 * which keeps Monte Carlo results independent of thread scheduling.
 * Distributions are implemented here rather than via <random> so output is
 * identical across standard libraries.
 */
class Stream {
public:
    explicit Stream(std::uint64_t key) : key_(key) {}
    static Stream keyed(std::initializer_list<std::uint64_t> parts) { return Stream(hash_key(parts)); }

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform on (0, 1).
    double uniform_open();
    // Uniform integer in [0, bound), bound > 0, unbiased.
    std::uint64_t below(std::uint64_t bound);
    // Standard normal via Box-Muller (pairs cached).
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace nullest
