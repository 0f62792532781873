#include "tubemeasure/offset_sampler.hpp"

#include "tubemeasure/detail/ball_sampling.hpp"
#include "tubemeasure/detail/workers.hpp"
#include "tubemeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubemeasure {

namespace {
constexpr std::uint64_t kMaxRejectionRounds = 1'000'000;
using detail::sample_ball_fast;
} // namespace

OffsetSampler::OffsetSampler(const PointCloud& cloud, double radius)
    : cloud_(&cloud), radius_(radius), index_(cloud) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("offset radius must be positive");
    }
    proposal_mass_ = static_cast<double>(cloud.size()) * ball_volume(cloud.dim()) *
                     std::pow(radius, cloud.dim());
}

OffsetSampler::Draw OffsetSampler::sample(RandomStream& rng) const {
    const std::size_t m = cloud_->size();
    const int dim = cloud_->dim();
    Point x(static_cast<std::size_t>(dim));
    for (std::uint64_t round = 1; round <= kMaxRejectionRounds; ++round) {
        const std::size_t i = rng.next_below(m);
        sample_ball_fast(dim, rng, x);
        auto atom = (*cloud_)[i];
        for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = atom[d] + radius_ * x[static_cast<std::size_t>(d)];
        const std::size_t k = index_.count_within(x, radius_);
        if (k == 0) continue; // proposal rounded just outside its own ball
        if (rng.next_below(k) == 0) return {x, round};
    }
    throw NumericalError("offset sampling exceeded the rejection-round cap");
}

namespace {

struct VolumeAcc {
    double sum = 0.0;
    double sum_sq = 0.0;
};

VolumeEstimate finish_volume(const std::vector<VolumeAcc>& parts, std::uint64_t samples,
                             double proposal_mass) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& a : parts) {
        sum += a.sum;
        sum_sq += a.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    VolumeEstimate out;
    out.value = proposal_mass * mean;
    out.std_error = proposal_mass * std::sqrt(var / n);
    return out;
}

} // namespace

VolumeEstimate OffsetSampler::volume(std::uint64_t samples, const RandomStream& stream,
                                     int threads) const {
    if (samples < 1) throw std::invalid_argument("volume: samples must be at least 1");
    const std::size_t m = cloud_->size();
    const int dim = cloud_->dim();

    auto parts = detail::run_workers<VolumeAcc>(
        threads, samples, stream, [&](std::uint64_t quota, RandomStream rng) {
            VolumeAcc acc;
            Point x(static_cast<std::size_t>(dim));
            for (std::uint64_t s = 0; s < quota; ++s) {
                const std::size_t i = rng.next_below(m);
                sample_ball_fast(dim, rng, x);
                auto atom = (*cloud_)[i];
                for (int d = 0; d < dim; ++d) {
                    x[static_cast<std::size_t>(d)] = atom[d] + radius_ * x[static_cast<std::size_t>(d)];
                }
                const std::size_t k = index_.count_within(x, radius_);
                if (k > 0) {
                    const double w = 1.0 / static_cast<double>(k);
                    acc.sum += w;
                    acc.sum_sq += w * w;
                }
            }
            return acc;
        });
    return finish_volume(parts, samples, proposal_mass_);
}

VolumeEstimate offset_volume(const PointCloud& cloud, double radius, std::uint64_t samples,
                             const RandomStream& stream, int threads) {
    return OffsetSampler(cloud, radius).volume(samples, stream, threads);
}

namespace {

struct MissAcc {
    std::uint64_t misses = 0;
};

// Fraction of uniform samples of `from`'s offset that fall outside `other`'s.
std::pair<double, double> outside_fraction(const OffsetSampler& from, const OffsetSampler& other,
                                           std::uint64_t samples, const RandomStream& stream,
                                           int threads) {
    auto parts = detail::run_workers<MissAcc>(
        threads, samples, stream, [&](std::uint64_t quota, RandomStream rng) {
            MissAcc acc;
            for (std::uint64_t s = 0; s < quota; ++s) {
                const auto draw = from.sample(rng);
                if (other.index().nearest(draw.point).distance > other.radius()) {
                    ++acc.misses;
                }
            }
            return acc;
        });
    std::uint64_t misses = 0;
    for (const auto& a : parts) misses += a.misses;
    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(misses) / n;
    return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / n)};
}

} // namespace

VolumeEstimate symdiff_volume(const PointCloud& a, double radius_a, const PointCloud& b,
                              double radius_b, std::uint64_t samples, const RandomStream& stream,
                              int threads) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("symdiff_volume: dimension mismatch");
    }
    if (samples < 1) throw std::invalid_argument("symdiff_volume: samples must be at least 1");

    const OffsetSampler sa(a, radius_a);
    const OffsetSampler sb(b, radius_b);
    const VolumeEstimate vol_a = sa.volume(samples, stream.substream(0), threads);
    const VolumeEstimate vol_b = sb.volume(samples, stream.substream(1), threads);
    const auto [pa, pa_err] = outside_fraction(sa, sb, samples, stream.substream(2), threads);
    const auto [pb, pb_err] = outside_fraction(sb, sa, samples, stream.substream(3), threads);

    VolumeEstimate out;
    out.value = vol_a.value * pa + vol_b.value * pb;
    out.std_error = std::sqrt(std::pow(pa * vol_a.std_error, 2) + std::pow(vol_a.value * pa_err, 2) +
                              std::pow(pb * vol_b.std_error, 2) + std::pow(vol_b.value * pb_err, 2));
    return out;
}

VolumeEstimate boundary_area_estimate(const PointCloud& cloud, double radius, double h,
                                      std::uint64_t samples, const RandomStream& stream,
                                      int threads) {
    if (!(h > 0.0) || !(h < radius)) {
        throw std::invalid_argument("boundary_area_estimate: need 0 < h < r");
    }
    if (samples < 1) throw std::invalid_argument("boundary_area_estimate: samples must be at least 1");

    const std::size_t m = cloud.size();
    const int dim = cloud.dim();
    const double r_lo = radius - h;
    const double r_hi = radius + h;
    const double mass_lo = static_cast<double>(m) * ball_volume(dim) * std::pow(r_lo, dim);
    const double mass_hi = static_cast<double>(m) * ball_volume(dim) * std::pow(r_hi, dim);
    const NearestIndex index(cloud);

    struct DiffAcc {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    // Common random numbers: the same (atom, direction, radius fraction)
    // drives both offsets, so most of the volume noise cancels in the
    // difference.
    auto parts = detail::run_workers<DiffAcc>(
        threads, samples, stream, [&](std::uint64_t quota, RandomStream rng) {
            DiffAcc acc;
            Point u(static_cast<std::size_t>(dim));
            Point x(static_cast<std::size_t>(dim));
            for (std::uint64_t s = 0; s < quota; ++s) {
                const std::size_t i = rng.next_below(m);
                sample_ball_fast(dim, rng, u);
                auto atom = cloud[i];
                double w_lo = 0.0, w_hi = 0.0;
                for (int d = 0; d < dim; ++d) {
                    x[static_cast<std::size_t>(d)] = atom[d] + r_lo * u[static_cast<std::size_t>(d)];
                }
                std::size_t k = index.count_within(x, r_lo);
                if (k > 0) w_lo = 1.0 / static_cast<double>(k);
                for (int d = 0; d < dim; ++d) {
                    x[static_cast<std::size_t>(d)] = atom[d] + r_hi * u[static_cast<std::size_t>(d)];
                }
                k = index.count_within(x, r_hi);
                if (k > 0) w_hi = 1.0 / static_cast<double>(k);
                const double diff = (mass_hi * w_hi - mass_lo * w_lo) / (2.0 * h);
                acc.sum += diff;
                acc.sum_sq += diff * diff;
            }
            return acc;
        });

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& a : parts) {
        sum += a.sum;
        sum_sq += a.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

} // namespace tubemeasure
