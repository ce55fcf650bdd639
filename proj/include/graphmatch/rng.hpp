#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace graphmatch {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Finalizer of the splitmix64 generator; bijective 64-bit mix.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Counter-based splittable stream: output i is a pure function of (seed, i),
// so any draw can be reproduced without replaying the stream and disjoint
// seeds give statistically independent streams.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return splitmix64_finalize(seed_ + (++ctr_) * kGolden); }

    // Uniform on [0,1), 53-bit mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double next_unit_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Unbiased integer in [0, m) by rejection.
    std::uint64_t next_below(std::uint64_t m) {
        const std::uint64_t threshold = (0 - m) % m; // 2^64 mod m
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % m;
        }
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t ctr_ = 0;
};

// Standard normals via Box-Muller on consecutive uniforms from one stream.
class NormalStream {
public:
    explicit NormalStream(CounterRng& rng) : rng_(rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_unit_open();
        const double u2 = rng_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    CounterRng& rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Seed for trial t of a parameter cell; every trial is independently
// addressable so workers can execute them in any order.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t cell_hash,
                                   std::uint64_t t) {
    return splitmix64_finalize(base_seed ^ (kGolden * (t + 1)) ^ cell_hash);
}

// Sub-stream seed for independent repetition k under one parent seed.
constexpr std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t k) {
    return splitmix64_finalize(base_seed ^ (kGolden * (k + 1)));
}

// FNV-1a 64-bit hash of a byte string.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace graphmatch
