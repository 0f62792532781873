#include "tubemeasure/geometry.hpp"

#include "tubemeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tubemeasure {

namespace {

void check_finite(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("point coordinates must be finite");
        }
    }
}

} // namespace

PointCloud::PointCloud(int dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
    if (dim_ <= 0) {
        throw std::invalid_argument("point cloud dimension must be positive");
    }
    if (data_.empty() || data_.size() % static_cast<std::size_t>(dim_) != 0) {
        throw std::invalid_argument("point cloud data size must be a non-zero multiple of dim");
    }
    check_finite(data_);
    count_ = data_.size() / static_cast<std::size_t>(dim_);
}

PointCloud::PointCloud(const std::vector<Point>& points) {
    if (points.empty()) {
        throw std::invalid_argument("point cloud must be non-empty");
    }
    dim_ = static_cast<int>(points.front().size());
    if (dim_ <= 0) {
        throw std::invalid_argument("point cloud dimension must be positive");
    }
    data_.reserve(points.size() * static_cast<std::size_t>(dim_));
    for (const Point& p : points) {
        if (static_cast<int>(p.size()) != dim_) {
            throw std::invalid_argument("all points must share the cloud dimension");
        }
        data_.insert(data_.end(), p.begin(), p.end());
    }
    check_finite(data_);
    count_ = points.size();
}

Point PointCloud::point(std::size_t i) const {
    auto s = (*this)[i];
    return Point(s.begin(), s.end());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

namespace {

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d2 = squared_distance(a[i], b[j]);
            if (d2 < best) {
                best = d2;
                if (best <= worst) break; // cannot raise the max any more
            }
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("hausdorff_distance: dimension mismatch");
    }
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::size_t covering_number(const PointCloud& cloud, double s) {
    if (!(s > 0.0)) {
        throw std::invalid_argument("covering_number: radius must be positive");
    }
    const std::size_t m = cloud.size();

    // First center: 1-center optimum restricted to cloud points.
    std::size_t first = 0;
    double best_eccentricity = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        double ecc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            ecc = std::max(ecc, squared_distance(cloud[i], cloud[j]));
            if (ecc >= best_eccentricity) break;
        }
        if (ecc < best_eccentricity) {
            best_eccentricity = ecc;
            first = i;
        }
    }

    const double s2 = s * s;
    std::vector<double> dist2(m);
    for (std::size_t j = 0; j < m; ++j) {
        dist2[j] = squared_distance(cloud[first], cloud[j]);
    }
    std::size_t centers = 1;
    for (;;) {
        std::size_t far = 0;
        double far_d2 = -1.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (dist2[j] > far_d2) {
                far_d2 = dist2[j];
                far = j;
            }
        }
        if (far_d2 <= s2) break;
        ++centers;
        for (std::size_t j = 0; j < m; ++j) {
            dist2[j] = std::min(dist2[j], squared_distance(cloud[far], cloud[j]));
        }
    }
    return centers;
}

double diameter(const PointCloud& cloud) {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < cloud.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.size(); ++j) {
            best = std::max(best, squared_distance(cloud[i], cloud[j]));
        }
    }
    return std::sqrt(best);
}

double ball_volume(int k) {
    if (k < 0) {
        throw std::invalid_argument("ball_volume: dimension must be non-negative");
    }
    if (k == 0) return 1.0;
    if (k == 1) return 2.0;
    const double pi = 3.14159265358979323846;
    return ball_volume(k - 2) * 2.0 * pi / static_cast<double>(k);
}

double sphere_measure(int k, double r) {
    if (k < 0) {
        throw std::invalid_argument("sphere_measure: dimension must be non-negative");
    }
    if (!(r >= 0.0)) {
        throw std::invalid_argument("sphere_measure: radius must be non-negative");
    }
    return static_cast<double>(k + 1) * ball_volume(k + 1) * std::pow(r, k);
}

} // namespace tubemeasure
