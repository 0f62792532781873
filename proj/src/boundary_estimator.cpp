#include "tubemeasure/boundary_estimator.hpp"

#include "tubemeasure/detail/ball_sampling.hpp"
#include "tubemeasure/detail/workers.hpp"
#include "tubemeasure/errors.hpp"
#include "tubemeasure/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubemeasure {

std::uint64_t required_sample_count(std::uint64_t covering_number, double eps, double delta) {
    if (covering_number < 1) {
        throw std::invalid_argument("required_sample_count: covering number must be positive");
    }
    if (!(eps > 0.0) || !(eps < 2.0)) {
        throw std::invalid_argument("required_sample_count: eps must lie in (0, 2)");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::invalid_argument("required_sample_count: delta must lie in (0, 1)");
    }
    const double n = 2.0 / (eps * eps) *
                     (std::log(16.0 / eps) * static_cast<double>(covering_number) +
                      std::log(2.0 / delta));
    return static_cast<std::uint64_t>(std::max(1.0, std::ceil(n)));
}

DiscreteMeasure BoundaryMeasureEstimate::beta() const {
    std::vector<double> w(counts.size());
    const double n = static_cast<double>(total);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        w[i] = static_cast<double>(counts[i]) / n;
    }
    return DiscreteMeasure::from_cloud(cloud, w);
}

DiscreteMeasure BoundaryMeasureEstimate::mu() const {
    std::vector<double> w(counts.size());
    const double scale = offset_volume.value / static_cast<double>(total);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        w[i] = static_cast<double>(counts[i]) * scale;
    }
    return DiscreteMeasure::from_cloud(cloud, w);
}

BoundaryMeasureEstimate estimate_boundary_measure(const PointCloud& cloud, double radius,
                                                  std::uint64_t n_samples,
                                                  const RandomStream& stream, int threads) {
    if (n_samples < 1) {
        throw std::invalid_argument("estimate_boundary_measure: N must be at least 1");
    }
    const OffsetSampler sampler(cloud, radius);
    const NearestIndex& index = sampler.index();
    const std::size_t m = cloud.size();
    const int dim = cloud.dim();

    struct TallyAcc {
        std::vector<std::uint64_t> counts;
        std::uint64_t proposals = 0;
        double weight_sum = 0.0;
        double weight_sq = 0.0;
    };

    // Each accepted draw is one sample; every proposal round also feeds the
    // offset-volume estimate through its 1/k score.
    auto parts = detail::run_workers<TallyAcc>(
        threads, n_samples, stream, [&](std::uint64_t quota, RandomStream rng) {
            TallyAcc acc;
            acc.counts.assign(m, 0);
            Point x(static_cast<std::size_t>(dim));
            std::uint64_t accepted = 0;
            while (accepted < quota) {
                const std::size_t i = rng.next_below(m);
                detail::sample_ball_fast(dim, rng, x);
                auto atom = cloud[i];
                for (int d = 0; d < dim; ++d) {
                    x[static_cast<std::size_t>(d)] = atom[d] + radius * x[static_cast<std::size_t>(d)];
                }
                ++acc.proposals;
                const std::size_t k = index.count_within(x, radius);
                if (k == 0) continue;
                const double w = 1.0 / static_cast<double>(k);
                acc.weight_sum += w;
                acc.weight_sq += w * w;
                if (rng.next_below(k) == 0) {
                    ++acc.counts[index.nearest(x).index];
                    ++accepted;
                }
            }
            return acc;
        });

    BoundaryMeasureEstimate est{cloud, radius, std::vector<std::uint64_t>(m, 0), 0, {}};
    std::uint64_t proposals = 0;
    double weight_sum = 0.0, weight_sq = 0.0;
    for (const auto& a : parts) {
        for (std::size_t i = 0; i < m; ++i) est.counts[i] += a.counts[i];
        proposals += a.proposals;
        weight_sum += a.weight_sum;
        weight_sq += a.weight_sq;
    }
    est.total = n_samples;

    const double p = static_cast<double>(proposals);
    const double mean = weight_sum / p;
    const double var = std::max(0.0, weight_sq / p - mean * mean);
    est.offset_volume.value = sampler.proposal_mass() * mean;
    est.offset_volume.std_error = sampler.proposal_mass() * std::sqrt(var / p);
    return est;
}

BoxRegion::BoxRegion(Point lo, Point hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.empty() || lower.size() != upper.size()) {
        throw std::invalid_argument("box bounds must be non-empty and of equal dimension");
    }
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!(lower[d] < upper[d])) {
            throw std::invalid_argument("box requires lower < upper componentwise");
        }
    }
}

double BoxRegion::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < lower.size(); ++d) v *= upper[d] - lower[d];
    return v;
}

Point BoxRegion::sample(RandomStream& rng) const {
    Point x(lower.size());
    for (std::size_t d = 0; d < lower.size(); ++d) {
        x[d] = lower[d] + (upper[d] - lower[d]) * rng.next_double();
    }
    return x;
}

DiscreteMeasure pushforward_from_box(const PointCloud& cloud, const BoxRegion& box,
                                     std::uint64_t n_samples, const RandomStream& stream,
                                     int threads) {
    if (box.dim() != cloud.dim()) {
        throw std::invalid_argument("pushforward_from_box: dimension mismatch");
    }
    if (n_samples < 1) {
        throw std::invalid_argument("pushforward_from_box: N must be at least 1");
    }
    const NearestIndex index(cloud);
    const std::size_t m = cloud.size();

    struct CountAcc {
        std::vector<std::uint64_t> counts;
    };
    auto parts = detail::run_workers<CountAcc>(
        threads, n_samples, stream, [&](std::uint64_t quota, RandomStream rng) {
            CountAcc acc;
            acc.counts.assign(m, 0);
            for (std::uint64_t s = 0; s < quota; ++s) {
                const Point x = box.sample(rng);
                ++acc.counts[index.nearest(x).index];
            }
            return acc;
        });

    std::vector<double> weights(m, 0.0);
    for (const auto& a : parts) {
        for (std::size_t i = 0; i < m; ++i) {
            weights[i] += static_cast<double>(a.counts[i]);
        }
    }
    const double n = static_cast<double>(n_samples);
    for (double& w : weights) w /= n;
    return DiscreteMeasure::from_cloud(cloud, weights);
}

MeanEstimate projection_l1_distance(const PointCloud& cloud_a, const PointCloud& cloud_b,
                                    const BoxRegion& box, std::uint64_t n_samples,
                                    const RandomStream& stream, int threads) {
    if (cloud_a.dim() != cloud_b.dim() || box.dim() != cloud_a.dim()) {
        throw std::invalid_argument("projection_l1_distance: dimension mismatch");
    }
    if (n_samples < 1) {
        throw std::invalid_argument("projection_l1_distance: N must be at least 1");
    }
    const NearestIndex index_a(cloud_a);
    const NearestIndex index_b(cloud_b);

    struct SumAcc {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    auto parts = detail::run_workers<SumAcc>(
        threads, n_samples, stream, [&](std::uint64_t quota, RandomStream rng) {
            SumAcc acc;
            for (std::uint64_t s = 0; s < quota; ++s) {
                const Point x = box.sample(rng);
                const auto pa = cloud_a[index_a.nearest(x).index];
                const auto pb = cloud_b[index_b.nearest(x).index];
                const double d = euclidean_distance(pa, pb);
                acc.sum += d;
                acc.sum_sq += d * d;
            }
            return acc;
        });

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& a : parts) {
        sum += a.sum;
        sum_sq += a.sum_sq;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return {box.volume() * mean, box.volume() * std::sqrt(var / n)};
}

} // namespace tubemeasure
