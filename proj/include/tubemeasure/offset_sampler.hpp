#pragma once

#include <cstdint>
#include <utility>

#include "tubemeasure/geometry.hpp"
#include "tubemeasure/nn_index.hpp"
#include "tubemeasure/random.hpp"

namespace tubemeasure {

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Uniform sampling on the r-offset of a point cloud by rejection:
/// pick a cloud point, pick a point in its r-ball, count the k covering
/// balls, accept with probability 1/k. The volume estimators reuse the
/// same proposals, scoring each by 1/k, which is exact (zero variance)
/// when the balls are pairwise disjoint or all coincident.
///
/// Borrows the cloud; it must outlive the sampler. All methods are const
/// and safe to call concurrently (each caller owns its RandomStream).
class OffsetSampler {
public:
    OffsetSampler(const PointCloud& cloud, double radius);

    const PointCloud& cloud() const { return *cloud_; }
    double radius() const { return radius_; }
    const NearestIndex& index() const { return index_; }

    /// Total proposal mass m * ball_volume(n) * r^n; the offset volume is
    /// this times the mean acceptance probability.
    double proposal_mass() const { return proposal_mass_; }

    struct Draw {
        Point point;
        std::uint64_t rounds;
    };
    /// One uniform draw from the offset; rounds is the number of rejection
    /// rounds used. Throws NumericalError past 10^6 rounds.
    Draw sample(RandomStream& rng) const;

    /// Offset-volume estimate from the given number of proposal rounds,
    /// split deterministically over worker substreams of `stream`.
    VolumeEstimate volume(std::uint64_t samples, const RandomStream& stream,
                          int threads = 1) const;

private:
    const PointCloud* cloud_;
    double radius_;
    NearestIndex index_;
    double proposal_mass_;
};

VolumeEstimate offset_volume(const PointCloud& cloud, double radius, std::uint64_t samples,
                             const RandomStream& stream, int threads = 1);

/// Volume of the symmetric difference of two offsets, estimated as
/// vol(A^ra) P(X outside B^rb) + vol(B^rb) P(Y outside A^ra) with X, Y
/// uniform on the respective offsets and exact membership tests.
VolumeEstimate symdiff_volume(const PointCloud& a, double radius_a, const PointCloud& b,
                              double radius_b, std::uint64_t samples, const RandomStream& stream,
                              int threads = 1);

/// Central-difference estimate (vol(r+h) - vol(r-h)) / 2h of the boundary
/// area of the offset, using common random numbers across the two radii.
VolumeEstimate boundary_area_estimate(const PointCloud& cloud, double radius, double h,
                                      std::uint64_t samples, const RandomStream& stream,
                                      int threads = 1);

} // namespace tubemeasure
