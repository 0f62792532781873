#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tubemeasure/geometry.hpp"

namespace tubemeasure {

/// Exact nearest-neighbor and ball-counting queries over a point cloud.
///
/// A kd-tree is used up to dimension 16, a linear scan above. Answers are
/// always exactly those of a brute-force scan; distance ties resolve to the
/// lowest point index. The index borrows the cloud, which must outlive it;
/// it is immutable after construction and safe for concurrent queries.
class NearestIndex {
public:
    struct Hit {
        std::size_t index;
        double distance;
    };

    explicit NearestIndex(const PointCloud& cloud);

    Hit nearest(std::span<const double> q) const;

    /// Number of cloud points in the closed ball of the given radius.
    std::size_t count_within(std::span<const double> q, double radius) const;

    const PointCloud& cloud() const { return *cloud_; }

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::uint32_t left = 0;  // 0 marks a leaf (node 0 is the root, never a child)
        std::uint32_t right = 0;
        int split_dim = -1;
        double split_val = 0.0;
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<double>& tmp_lo,
                        std::vector<double>& tmp_hi);

    template <int DIM>
    std::size_t count_impl(const double* q, double r2) const;
    template <int DIM>
    void nearest_impl(std::uint32_t node, const double* q, double& best_d2,
                      std::size_t& best_idx) const;

    const PointCloud* cloud_;
    int dim_;
    bool brute_ = false;
    std::vector<double> pts_;          // coordinates reordered into tree layout
    std::vector<std::uint32_t> perm_;  // tree position -> original index
    std::vector<Node> nodes_;
    std::vector<double> box_lo_;       // per node, dim_ values
    std::vector<double> box_hi_;
};

} // namespace tubemeasure
