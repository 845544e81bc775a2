#pragma once

#include <cstdint>
#include <optional>

namespace resci::stats {

/// Identifies one resampled draw. Every draw is a pure function of its key,
/// so any subset of draws can be produced on any thread in any order.
struct DrawKey {
    std::uint64_t master_seed = 0;
    std::uint64_t run = 0;
    std::uint64_t pair = 0;
    std::uint64_t subset = 0;

    friend bool operator==(const DrawKey&, const DrawKey&) = default;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` of `master` (replicates, runs, ...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
    return mix64(mix64(mix64(master) ^ index) ^ salt);
}

std::uint64_t hash_key(const DrawKey& key);

/// Uniform in (0, 1) from the top 53 bits of the key hash.
double uniform_draw(const DrawKey& key);

/// N(0, 1) draw by inversion of uniform_draw.
double standard_normal_draw(const DrawKey& key);

/// One draw from N(z_hat, 1); with truncation c, from N(z_hat, 1)
/// restricted to [z_hat - c, z_hat + c] (inverse-CDF sampling).
double resample_statistic(double z_hat, const DrawKey& key, std::optional<double> truncation = std::nullopt);

}  // namespace resci::stats
