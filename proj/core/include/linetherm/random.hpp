#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace linetherm {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the named stream: splitmix64(seed ^ splitmix64(fnv1a64(name))).
std::uint64_t stream_seed(std::uint64_t seed, std::string_view name) noexcept;

/// Deterministic random stream keyed by (seed, name).
///
/// Engine: std::mt19937_64 seeded with stream_seed(seed, name).
/// Uniforms use the top 53 bits of each 64-bit draw, u = (x >> 11) * 2^-53.
/// Normals use the Box-Muller transform on (1 - u1, u2), consuming two
/// uniforms per pair and returning the cosine branch first.
///
/// Every observable draws from its own named stream, so adding a new
/// observable never shifts the values of existing ones.
class Stream {
public:
    Stream(std::uint64_t seed, std::string_view name);

    std::uint64_t next() { return engine_(); }
    double uniform();
    double normal();
    double normal(double mean, double sigma) { return mean + sigma * normal(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace linetherm
