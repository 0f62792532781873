#include "tubemeasure/oracles.hpp"

#include "tubemeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubemeasure {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

PiecewiseMeasure segment_measure(const Point& a, const Point& b, double r) {
    if (a.size() != 2 || b.size() != 2) {
        throw std::invalid_argument("segment_measure: endpoints must be 2-D");
    }
    if (a == b) throw std::invalid_argument("segment_measure: endpoints must differ");
    if (!(r > 0.0)) throw std::invalid_argument("segment_measure: r must be positive");

    PiecewiseMeasure m(2);
    const double endpoint_mass = 0.5 * kPi * r * r;
    m.add_atom(a, endpoint_mass);
    m.add_atom(b, endpoint_mass);
    m.add_segment(a, b, 2.0 * r);
    return m;
}

PiecewiseMeasure convex_polygon_measure(const std::vector<Point>& vertices, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("convex_polygon_measure: r must be positive");
    const std::size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("convex_polygon_measure: need at least 3 vertices");

    PiecewiseMeasure m(2);
    m.add_region(vertices, 1.0); // validates convexity and orientation
    for (std::size_t i = 0; i < n; ++i) {
        m.add_segment(vertices[i], vertices[(i + 1) % n], r);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point& prev = vertices[(i + n - 1) % n];
        const Point& cur = vertices[i];
        const Point& next = vertices[(i + 1) % n];
        const double e1x = cur[0] - prev[0], e1y = cur[1] - prev[1];
        const double e2x = next[0] - cur[0], e2y = next[1] - cur[1];
        const double exterior = std::atan2(e1x * e2y - e1y * e2x, e1x * e2x + e1y * e2y);
        m.add_atom(cur, 0.5 * exterior * r * r);
    }
    return m;
}

KnifeBlade knife_blade(double length, double reach, int n_segments, int samples_per_arc) {
    if (!(length > 0.0) || !(reach > 0.0)) {
        throw std::invalid_argument("knife_blade: length and reach must be positive");
    }
    if (n_segments < 1) throw std::invalid_argument("knife_blade: need at least one segment");
    if (samples_per_arc < 1) throw std::invalid_argument("knife_blade: need at least one sample per arc");

    const double piece = length / n_segments;
    const double arc_radius = std::sqrt(reach * reach + 0.25 * piece * piece);
    const double bulge = arc_radius - reach;
    const double half_angle = std::asin(0.5 * piece / arc_radius);

    std::vector<double> flat;
    flat.reserve(2 * (static_cast<std::size_t>(n_segments) * samples_per_arc + 1));
    for (int i = 0; i <= n_segments; ++i) {
        flat.push_back(i * piece);
        flat.push_back(0.0);
    }
    for (int i = 0; i < n_segments; ++i) {
        const double cx = (i + 0.5) * piece;
        for (int j = 1; j < samples_per_arc; ++j) {
            const double theta = -half_angle + 2.0 * half_angle * j / samples_per_arc;
            flat.push_back(cx + arc_radius * std::sin(theta));
            flat.push_back(-reach + arc_radius * std::cos(theta));
        }
    }
    return {PointCloud(2, std::move(flat)), bulge, length, n_segments};
}

PointCloud jitter(const PointCloud& cloud, double eps, const RandomStream& stream) {
    if (!(eps >= 0.0)) throw std::invalid_argument("jitter: eps must be non-negative");
    RandomStream rng = stream;
    const int dim = cloud.dim();
    std::vector<double> flat(cloud.flat());
    Point u(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        sample_unit_ball(dim, rng, u);
        for (int d = 0; d < dim; ++d) {
            flat[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] +=
                eps * u[static_cast<std::size_t>(d)];
        }
    }
    return PointCloud(dim, std::move(flat));
}

PointCloud sample_segment(const Point& a, const Point& b, std::size_t count) {
    if (count < 1) throw std::invalid_argument("sample_segment: need at least one point");
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("sample_segment: endpoint dimension mismatch");
    }
    const int dim = static_cast<int>(a.size());
    std::vector<double> flat;
    flat.reserve(count * a.size());
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        for (int d = 0; d < dim; ++d) {
            flat.push_back(a[static_cast<std::size_t>(d)] +
                           t * (b[static_cast<std::size_t>(d)] - a[static_cast<std::size_t>(d)]));
        }
    }
    return PointCloud(dim, std::move(flat));
}

PointCloud sample_circle(const Point& center, double radius, std::size_t count) {
    if (center.size() != 2) throw std::invalid_argument("sample_circle: center must be 2-D");
    if (!(radius > 0.0)) throw std::invalid_argument("sample_circle: radius must be positive");
    if (count < 1) throw std::invalid_argument("sample_circle: need at least one point");
    std::vector<double> flat;
    flat.reserve(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(count);
        flat.push_back(center[0] + radius * std::cos(theta));
        flat.push_back(center[1] + radius * std::sin(theta));
    }
    return PointCloud(2, std::move(flat));
}

PointCloud sample_convex_polygon(const std::vector<Point>& vertices, double boundary_spacing,
                                 double interior_spacing) {
    if (!(boundary_spacing > 0.0) || !(interior_spacing > 0.0)) {
        throw std::invalid_argument("sample_convex_polygon: spacings must be positive");
    }
    polygon_area(vertices); // validates vertex count and shape
    const std::size_t n = vertices.size();

    std::vector<double> flat;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % n];
        const double len = euclidean_distance(a, b);
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(len / boundary_spacing)));
        for (std::size_t j = 0; j < steps; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(steps);
            flat.push_back(a[0] + t * (b[0] - a[0]));
            flat.push_back(a[1] + t * (b[1] - a[1]));
        }
    }

    double x0 = vertices[0][0], x1 = x0, y0 = vertices[0][1], y1 = y0;
    for (const Point& p : vertices) {
        x0 = std::min(x0, p[0]);
        x1 = std::max(x1, p[0]);
        y0 = std::min(y0, p[1]);
        y1 = std::max(y1, p[1]);
    }
    auto strictly_inside = [&](double x, double y) {
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = vertices[i];
            const Point& b = vertices[(i + 1) % n];
            const double cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
            if (cross <= 1e-12) return false;
        }
        return true;
    };
    for (double x = x0 + interior_spacing; x < x1; x += interior_spacing) {
        for (double y = y0 + interior_spacing; y < y1; y += interior_spacing) {
            if (strictly_inside(x, y)) {
                flat.push_back(x);
                flat.push_back(y);
            }
        }
    }
    return PointCloud(2, std::move(flat));
}

} // namespace tubemeasure
