#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tubemeasure {

using Point = std::vector<double>;

/// A finite set of points in R^n with a fixed ambient dimension.
/// Duplicate points are allowed and input order is preserved.
class PointCloud {
public:
    /// Takes row-major coordinates, flat.size() must be a multiple of dim.
    PointCloud(int dim, std::vector<double> flat);
    explicit PointCloud(const std::vector<Point>& points);

    int dim() const { return dim_; }
    std::size_t size() const { return count_; }

    std::span<const double> operator[](std::size_t i) const {
        return {data_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    Point point(std::size_t i) const;
    const std::vector<double>& flat() const { return data_; }

private:
    int dim_ = 0;
    std::size_t count_ = 0;
    std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Max of the two directed max-min distances; 0 iff equal as sets.
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

/// Upper bound on the covering number N(cloud, s): greedy farthest-point
/// selection with centers restricted to cloud points. The first center is
/// the cloud point minimizing the maximum distance to the cloud, and the
/// selection sequence does not depend on s, so the result is non-increasing
/// in s. Ties break toward the lowest point index.
std::size_t covering_number(const PointCloud& cloud, double s);

/// Max pairwise distance; 0 for a singleton.
double diameter(const PointCloud& cloud);

/// Volume of the unit ball in R^k (k >= 0).
double ball_volume(int k);

/// k-dimensional Hausdorff measure of the k-sphere of radius r,
/// i.e. (k+1) * ball_volume(k+1) * r^k.
double sphere_measure(int k, double r);

} // namespace tubemeasure
