#pragma once

#include <cstdint>
#include <random>

namespace itojump {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream for one Monte-Carlo path. Depends only on
/// (master_seed, path_index), never on the order paths are processed in.
inline Rng path_rng(std::uint64_t master_seed, std::uint64_t path_index) {
    const std::uint64_t a = mix64(master_seed);
    const std::uint64_t b = mix64(a ^ mix64(path_index + 0x632BE59BD9B4E019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

inline double standard_normal(Rng& rng) {
    return std::normal_distribution<double>{0.0, 1.0}(rng);
}

/// Uniform on the open interval (0, 1).
inline double open_uniform(Rng& rng) {
    double u;
    do {
        u = std::uniform_real_distribution<double>{0.0, 1.0}(rng);
    } while (u <= 0.0);
    return u;
}

}  // namespace itojump
