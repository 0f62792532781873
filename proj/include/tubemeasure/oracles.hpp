#pragma once

#include <cstdint>
#include <vector>

#include "tubemeasure/geometry.hpp"
#include "tubemeasure/measures.hpp"
#include "tubemeasure/random.hpp"

namespace tubemeasure {

/// Closed-form boundary measure of a planar segment at scale r:
/// density 2r along the segment plus an atom of (pi/2) r^2 at each endpoint.
PiecewiseMeasure segment_measure(const Point& a, const Point& b, double r);

/// Closed-form boundary measure of a solid convex polygon at scale r:
/// the region with density 1, each edge with density r, and an atom of
/// theta r^2 / 2 at each vertex (theta the exterior angle). Total mass is
/// the Steiner polynomial Area + Perimeter r + pi r^2.
PiecewiseMeasure convex_polygon_measure(const std::vector<Point>& vertices, double r);

/// Hausdorff approximation of a horizontal length-L segment by a union of
/// circular arcs bulging by sqrt(R^2 + (l/2)^2) - R, l = L/n_segments; the
/// arc circles are centered on the parallel line at distance R below.
/// The cloud holds the n_segments+1 division points plus samples_per_arc-1
/// interior samples per arc, equally spaced by arc length.
struct KnifeBlade {
    PointCloud cloud;
    double hausdorff_to_segment;
    double segment_length;
    int n_segments;
};

KnifeBlade knife_blade(double length, double reach, int n_segments, int samples_per_arc);

/// Displaces every point by an independent uniform vector in the closed
/// eps-ball, so the Hausdorff distance to the input is at most eps.
PointCloud jitter(const PointCloud& cloud, double eps, const RandomStream& stream);

// Deterministic samplers used to feed the estimators with known shapes.

/// count equally spaced points from a to b inclusive (count >= 2).
PointCloud sample_segment(const Point& a, const Point& b, std::size_t count);

/// count equally spaced points on the circle, starting at angle 0.
PointCloud sample_circle(const Point& center, double radius, std::size_t count);

/// Boundary points every boundary_spacing along each edge plus an interior
/// grid at interior_spacing (points strictly inside the polygon).
PointCloud sample_convex_polygon(const std::vector<Point>& vertices, double boundary_spacing,
                                 double interior_spacing);

} // namespace tubemeasure
