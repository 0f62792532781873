#pragma once

#include <cstdint>
#include <vector>

#include "tubemeasure/geometry.hpp"
#include "tubemeasure/measures.hpp"
#include "tubemeasure/offset_sampler.hpp"
#include "tubemeasure/random.hpp"

namespace tubemeasure {

/// Smallest N with 2 exp(ln(16/eps) coveringNumber - N eps^2 / 2) <= delta,
/// i.e. ceil((2/eps^2)(ln(16/eps) coveringNumber + ln(2/delta))).
/// The caller supplies coveringNumber = covering_number(cloud, eps/16).
std::uint64_t required_sample_count(std::uint64_t covering_number, double eps, double delta);

/// Monte-Carlo boundary-measure estimate: per-atom hit counts of N uniform
/// offset samples projected onto the cloud, plus the offset-volume estimate
/// accumulated from the same proposal stream.
struct BoundaryMeasureEstimate {
    PointCloud cloud;
    double radius = 0.0;
    std::vector<std::uint64_t> counts; // per cloud point, sums to total
    std::uint64_t total = 0;           // N
    VolumeEstimate offset_volume;

    /// Probability measure counts/N on the cloud atoms.
    DiscreteMeasure beta() const;
    /// Unnormalized measure: offset volume times beta.
    DiscreteMeasure mu() const;
};

BoundaryMeasureEstimate estimate_boundary_measure(const PointCloud& cloud, double radius,
                                                  std::uint64_t n_samples,
                                                  const RandomStream& stream, int threads = 1);

/// Axis-aligned box, lower < upper componentwise.
struct BoxRegion {
    Point lower;
    Point upper;

    BoxRegion(Point lo, Point hi);
    int dim() const { return static_cast<int>(lower.size()); }
    double volume() const;
    Point sample(RandomStream& rng) const;
};

/// Empirical pushforward of the uniform probability measure on the box
/// under nearest-point projection onto the cloud.
DiscreteMeasure pushforward_from_box(const PointCloud& cloud, const BoxRegion& box,
                                     std::uint64_t n_samples, const RandomStream& stream,
                                     int threads = 1);

struct MeanEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// volume(box) times the mean of |p_A(X) - p_B(X)| over uniform X in the
/// box: a Monte-Carlo L1 distance between the two projection maps.
MeanEstimate projection_l1_distance(const PointCloud& cloud_a, const PointCloud& cloud_b,
                                    const BoxRegion& box, std::uint64_t n_samples,
                                    const RandomStream& stream, int threads = 1);

} // namespace tubemeasure
