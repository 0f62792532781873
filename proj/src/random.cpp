#include "tubemeasure/random.hpp"

#include <cmath>
#include <stdexcept>

namespace tubemeasure {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t mix_pair(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + 0x9E3779B97F4A7C15ull * (b + 1);
    std::uint64_t z = splitmix64(s);
    return z ^ splitmix64(s);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    std::uint64_t s = mix_pair(seed, stream);
    bool nonzero = false;
    for (auto& w : state_) {
        w = splitmix64(s);
        nonzero = nonzero || w != 0;
    }
    if (!nonzero) state_[0] = 1; // xoshiro state must not be all-zero
}

std::uint64_t RandomStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_gaussian_ = v * f;
    has_cached_gaussian_ = true;
    return u * f;
}

std::uint64_t RandomStream::next_below(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("next_below: n must be positive");
    }
    if (n == 1) return 0;
    // Lemire multiply-shift with rejection on the low word; unbiased and
    // division-free on the fast path.
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        while (low < threshold) {
            x = next_u64();
            m = static_cast<unsigned __int128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

RandomStream RandomStream::substream(std::uint64_t idx) const {
    return RandomStream(mix_pair(seed_, stream_), idx);
}

void sample_unit_ball(int dim, RandomStream& rng, std::span<double> out) {
    if (dim < 1 || static_cast<std::size_t>(dim) != out.size()) {
        throw std::invalid_argument("sample_unit_ball: bad dimension");
    }
    double norm2;
    do {
        norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            out[i] = rng.next_gaussian();
            norm2 += out[i] * out[i];
        }
    } while (norm2 == 0.0);

    const double u = rng.next_double();
    double radius;
    switch (dim) {
        case 1: radius = u; break;
        case 2: radius = std::sqrt(u); break;
        case 3: radius = std::cbrt(u); break;
        default: radius = std::pow(u, 1.0 / static_cast<double>(dim)); break;
    }
    const double scale = radius / std::sqrt(norm2);
    for (int i = 0; i < dim; ++i) out[i] *= scale;
}

Point sample_unit_ball(int dim, RandomStream& rng) {
    Point p(static_cast<std::size_t>(dim));
    sample_unit_ball(dim, rng, p);
    return p;
}

} // namespace tubemeasure
