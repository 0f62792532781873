#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tubemeasure/geometry.hpp"

namespace tubemeasure {

/// Finitely supported measure. Construction merges exactly-coinciding
/// locations by summing weights, so support points are pairwise distinct.
/// Unless the signed flag is set, weights must be non-negative.
class DiscreteMeasure {
public:
    static DiscreteMeasure from_atoms(int dim, std::vector<std::pair<Point, double>> atoms,
                                      bool is_signed = false);
    /// One weight per cloud point; duplicates in the cloud merge.
    static DiscreteMeasure from_cloud(const PointCloud& cloud, const std::vector<double>& weights,
                                      bool is_signed = false);

    int dim() const { return dim_; }
    std::size_t size() const { return count_; }
    bool is_signed() const { return signed_; }

    std::span<const double> location(std::size_t i) const {
        return {locations_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const;

private:
    DiscreteMeasure() = default;

    int dim_ = 0;
    std::size_t count_ = 0;
    bool signed_ = false;
    std::vector<double> locations_; // row-major
    std::vector<double> weights_;
};

/// Measure with atoms plus uniform-density pieces: segments carrying mass
/// per unit length and (2-D only) convex polygonal regions carrying mass
/// per unit area.
class PiecewiseMeasure {
public:
    struct Segment {
        Point a;
        Point b;
        double density; // mass per unit length, >= 0
    };
    struct PolygonRegion {
        std::vector<Point> vertices; // simple convex, counter-clockwise
        double density;              // mass per unit area, >= 0
    };

    explicit PiecewiseMeasure(int dim);

    void add_atom(Point location, double weight);
    void add_segment(Point a, Point b, double density);
    void add_region(std::vector<Point> vertices, double density); // dim 2 only

    int dim() const { return dim_; }
    const std::vector<std::pair<Point, double>>& atoms() const { return atoms_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<PolygonRegion>& regions() const { return regions_; }

    double total_mass() const;

    /// Atoms copied; each segment split into equal bins with its mass at bin
    /// midpoints; regions rasterized on a uniform grid with each cell's exact
    /// overlap mass placed at the cell center. Total mass is preserved.
    DiscreteMeasure discretize(int bins_per_segment) const;

private:
    int dim_;
    std::vector<std::pair<Point, double>> atoms_;
    std::vector<Segment> segments_;
    std::vector<PolygonRegion> regions_;
};

/// Area of a simple convex CCW polygon (shoelace).
double polygon_area(const std::vector<Point>& vertices);

/// Bounded-Lipschitz distance: sup of |mu(f) - nu(f)| over test functions
/// with Lip f + sup|f| <= 1. Computed exactly as a linear program over the
/// union support (restriction is lossless by Lipschitz extension), solved
/// through its min-cost-flow dual. Handles signed and unequal-mass inputs.
double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Wasserstein-1 distance with Euclidean ground cost, exact optimal
/// transport. Requires non-negative weights and equal total masses
/// (within 1e-9).
double w1_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

} // namespace tubemeasure
