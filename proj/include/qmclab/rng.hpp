#pragma once

#include <cstdint>

namespace qmclab {

// Counter-based generator: output i is a pure function of (key, i), so
// streams are random-access and fork cheaply without shared state.
// Mixer is the SplitMix64 finalizer.
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Folds a word into a seed. Used to derive independent child streams from
// (master seed, point index, repetition index, ...) tuples.
constexpr std::uint64_t fold_seed(std::uint64_t seed, std::uint64_t word) {
    return mix64(seed ^ mix64(word + kGoldenGamma));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
    return fold_seed(master, a);
}
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return fold_seed(fold_seed(master, a), b);
}
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) {
    return fold_seed(fold_seed(fold_seed(master, a), b), c);
}

class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : key_(mix64(seed + kGoldenGamma)) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGoldenGamma); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, n) via Lemire multiply-shift.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    Rng fork(std::uint64_t stream) const { return Rng(fold_seed(key_, stream)); }

    // UniformRandomBitGenerator interface.
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ull; }
    std::uint64_t operator()() { return next_u64(); }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qmclab
