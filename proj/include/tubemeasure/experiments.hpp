#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tubemeasure/boundary_estimator.hpp"
#include "tubemeasure/geometry.hpp"
#include "tubemeasure/random.hpp"

namespace tubemeasure {

struct StabilityRow {
    double eps = 0.0;       // measured Hausdorff distance of the pair
    double dist = 0.0;      // measured measure/projection distance
    double ratio = 0.0;     // dist / sqrt(eps), 0 when eps is 0
    double std_error = 0.0; // Monte-Carlo scale of dist
    double bound = 0.0;     // constant-free theorem bound, 0 when not applicable
};

struct StabilityReport {
    std::vector<StabilityRow> rows; // sorted by eps ascending
    double fitted_slope = 0.0;      // log-log slope of dist against eps
    double radius = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Jitters the cloud at each eps, estimates both unnormalized boundary
/// measures, and records their bounded-Lipschitz distance against
/// sqrt(measured Hausdorff distance), plus the constant-free value of the
/// stability bound N(K, r-eps) r^n (r + diam K) sqrt(eps/r).
/// Requires max(eps) < min(diam K, r, r^2/diam K); throws WindowError
/// otherwise.
StabilityReport stability_experiment(const PointCloud& cloud, double radius,
                                     const std::vector<double>& eps_list,
                                     std::uint64_t n_per_estimate, const RandomStream& stream,
                                     int threads = 1);

/// Knife-blade tightness ladder: for each segment count, builds the blade,
/// takes the closed-form Hausdorff distance, and Monte-Carlo-estimates the
/// L1 distance between the projections onto a dense segment sample and the
/// blade sample over the box.
StabilityReport holder_knife_experiment(double length, double reach,
                                        const std::vector<int>& n_segments_list,
                                        const BoxRegion& box, std::uint64_t n_samples,
                                        const RandomStream& stream, int threads = 1,
                                        int samples_per_arc = 256);

struct BoundCheck {
    double measured = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

/// Offset symmetric-difference volume of (cloud, jittered cloud) against
/// 2 N(K, r-eps) sphere_measure(n-1, 2r+2eps) eps; passes within 5 sigma.
BoundCheck symdiff_bound_check(const PointCloud& cloud, double radius, double eps,
                               std::uint64_t samples, const RandomStream& stream,
                               int threads = 1);

/// Finite-difference offset boundary area against
/// N(cloud, r) sphere_measure(n-1, 2r); passes within 5 sigma.
BoundCheck boundary_area_check(const PointCloud& cloud, double radius, double h,
                               std::uint64_t samples, const RandomStream& stream,
                               int threads = 1);

struct ConvexityReport {
    std::uint64_t convexity_trials = 0;
    std::uint64_t gradient_trials = 0; // trials surviving the uniqueness filter
    std::uint64_t convexity_violations = 0;
    std::uint64_t gradient_violations = 0;
    bool pass = false;
    std::string counterexample; // empty when pass
};

/// Checks that v(x) = |x|^2 - d_K(x)^2 is midpoint-convex (tolerance 1e-9)
/// and that its central finite difference (step 1e-5) matches twice the
/// projection at points whose nearest-distance gap to the second-nearest
/// exceeds 1e-6 (tolerance 1e-3 per component). Gradient trials run at a
/// tenth of the convexity trials.
ConvexityReport convexity_and_gradient_check(const PointCloud& cloud, std::uint64_t trials,
                                             const RandomStream& stream);

// Small statistics helpers shared by the reports and the checks.

/// Least-squares slope of log(y) against log(x) over pairs with x, y > 0.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

/// Exact permutation p-value of positive Spearman correlation (n <= 9).
double spearman_pvalue_positive(const std::vector<double>& x, const std::vector<double>& y);

} // namespace tubemeasure
