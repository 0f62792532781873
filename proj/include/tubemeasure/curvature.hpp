#pragma once

#include <cstdint>
#include <vector>

#include "tubemeasure/geometry.hpp"
#include "tubemeasure/measures.hpp"
#include "tubemeasure/random.hpp"

namespace tubemeasure {

/// Strictly increasing positive radii, exactly dim+1 of them.
struct RadiiSchedule {
    std::vector<double> radii;
    int ambient_dim;

    RadiiSchedule(std::vector<double> r, int dim);

    /// Geometric ladder r_i = r0 * g^i with r_n / r0 = 4.
    static RadiiSchedule geometric(double r0, int dim);
};

/// Signed measures Phi_0 .. Phi_n on the cloud atoms, recovered from
/// per-atom masses at the scheduled radii by solving, atom by atom,
///   sum_j ball_volume(n-j) Phi_j r_i^(n-j) = mass_i.
struct CurvatureProfile {
    std::vector<DiscreteMeasure> profiles; // n+1 signed measures
    std::vector<double> radii;
    double condition_number = 0.0; // 1-norm condition of the solve matrix

    /// Total weight of Phi_j.
    double total(std::size_t j) const { return profiles.at(j).total_mass(); }
};

/// mass_table[i][a] is the measure of atom a at radius i. Throws
/// NumericalError when the solve matrix has condition number above 1e12.
CurvatureProfile solve_curvature(const PointCloud& atoms,
                                 const std::vector<std::vector<double>>& mass_table,
                                 const RadiiSchedule& schedule);

/// Runs the boundary-measure estimator at each radius of the schedule and
/// solves for the curvature profile from the estimated per-atom masses.
CurvatureProfile curvature_from_cloud(const PointCloud& cloud, const RadiiSchedule& schedule,
                                      std::uint64_t n_per_radius, const RandomStream& stream,
                                      int threads = 1);

} // namespace tubemeasure
