#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tubemeasure/geometry.hpp"

namespace tubemeasure {

/// Deterministic random stream, reproducible bit-for-bit across platforms.
///
/// The generator is xoshiro256++ seeded through a splitmix64 chain from the
/// (seed, stream) pair; substreams for parallel workers derive the same way,
/// so a fixed (seed, worker count) always replays the same sequences.
/// No std:: distributions are used anywhere: uniform doubles come from the
/// top 53 bits, Gaussians from the polar method.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double next_double();

    /// Standard Gaussian (polar method; pairs are cached).
    double next_gaussian();

    /// Uniform integer in [0, n), n >= 1. Consumes no state when n == 1.
    std::uint64_t next_below(std::uint64_t n);

    /// Independent stream derived from this one's identity; does not
    /// consume or depend on the current position.
    RandomStream substream(std::uint64_t idx) const;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_[4] = {0, 0, 0, 0};
    bool has_cached_gaussian_ = false;
    double cached_gaussian_ = 0.0;
};

/// Uniform sample from the closed unit ball in R^dim: isotropic Gaussian
/// direction scaled by U^(1/dim). Writes dim coordinates into out.
void sample_unit_ball(int dim, RandomStream& rng, std::span<double> out);
Point sample_unit_ball(int dim, RandomStream& rng);

} // namespace tubemeasure
