#include "tubemeasure/experiments.hpp"

#include "tubemeasure/errors.hpp"
#include "tubemeasure/measures.hpp"
#include "tubemeasure/nn_index.hpp"
#include "tubemeasure/offset_sampler.hpp"
#include "tubemeasure/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tubemeasure {

namespace {

// Conservative Monte-Carlo scale for the bl distance of two estimates:
// volume noise plus the multinomial noise of both count vectors.
double estimate_pair_noise(const BoundaryMeasureEstimate& a, const BoundaryMeasureEstimate& b) {
    auto count_noise = [](const BoundaryMeasureEstimate& e) {
        const double n = static_cast<double>(e.total);
        double acc = 0.0;
        for (std::uint64_t c : e.counts) {
            const double p = static_cast<double>(c) / n;
            acc += p * (1.0 - p) / n;
        }
        return e.offset_volume.value * std::sqrt(acc);
    };
    return std::sqrt(std::pow(a.offset_volume.std_error, 2) +
                     std::pow(b.offset_volume.std_error, 2) + std::pow(count_noise(a), 2) +
                     std::pow(count_noise(b), 2));
}

} // namespace

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog_slope: length mismatch");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    const double d = n * sxx - sx * sx;
    if (d == 0.0) return 0.0;
    return (n * sxy - sx * sy) / d;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j - 1) + 1.0;
        for (std::size_t k = i; k < j; ++k) r[order[k]] = mid;
        i = j;
    }
    return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return num / std::sqrt(va * vb);
}

} // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman_rho: need paired data of length >= 2");
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return pearson(rx, ry);
}

double spearman_pvalue_positive(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2 || n > 9) {
        throw std::invalid_argument("spearman_pvalue_positive: need 2..9 paired values");
    }
    const double observed = spearman_rho(x, y);
    const auto ry = ranks(y);
    std::vector<double> perm = ranks(x);
    std::sort(perm.begin(), perm.end());
    std::size_t at_least = 0, count = 0;
    do {
        ++count;
        if (pearson(perm, ry) >= observed - 1e-12) ++at_least;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(at_least) / static_cast<double>(count);
}

StabilityReport stability_experiment(const PointCloud& cloud, double radius,
                                     const std::vector<double>& eps_list,
                                     std::uint64_t n_per_estimate, const RandomStream& stream,
                                     int threads) {
    if (eps_list.empty()) throw std::invalid_argument("stability_experiment: eps list is empty");
    const double diam = diameter(cloud);
    const double window = std::min({diam, radius, radius * radius / diam});
    for (double eps : eps_list) {
        if (!(eps >= 0.0)) throw std::invalid_argument("stability_experiment: eps must be >= 0");
        if (!(eps < window)) {
            std::ostringstream msg;
            msg << "stability_experiment: eps " << eps << " outside the validity window "
                << "min(diam K, r, r^2/diam K) = " << window;
            throw WindowError(msg.str());
        }
    }

    StabilityReport report;
    report.radius = radius;
    report.n_samples = n_per_estimate;
    report.seed = stream.seed();
    report.threads = threads;

    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const RandomStream sub = stream.substream(i);
        const PointCloud moved = jitter(cloud, eps_list[i], sub.substream(0));
        const double eps_measured = hausdorff_distance(cloud, moved);

        const auto est_a = estimate_boundary_measure(cloud, radius, n_per_estimate,
                                                     sub.substream(1), threads);
        const auto est_b = estimate_boundary_measure(moved, radius, n_per_estimate,
                                                     sub.substream(2), threads);
        const double dist = bl_distance(est_a.mu(), est_b.mu());

        StabilityRow row;
        row.eps = eps_measured;
        row.dist = dist;
        row.ratio = eps_measured > 0.0 ? dist / std::sqrt(eps_measured) : 0.0;
        row.std_error = estimate_pair_noise(est_a, est_b);
        row.bound = eps_measured > 0.0
                        ? static_cast<double>(covering_number(cloud, radius - eps_measured)) *
                              std::pow(radius, cloud.dim()) * (radius + diam) *
                              std::sqrt(eps_measured / radius)
                        : 0.0;
        report.rows.push_back(row);
    }

    std::sort(report.rows.begin(), report.rows.end(),
              [](const StabilityRow& a, const StabilityRow& b) { return a.eps < b.eps; });
    std::vector<double> xs, ys;
    for (const auto& row : report.rows) {
        xs.push_back(row.eps);
        ys.push_back(row.dist);
    }
    report.fitted_slope = fit_loglog_slope(xs, ys);
    return report;
}

StabilityReport holder_knife_experiment(double length, double reach,
                                        const std::vector<int>& n_segments_list,
                                        const BoxRegion& box, std::uint64_t n_samples,
                                        const RandomStream& stream, int threads,
                                        int samples_per_arc) {
    if (n_segments_list.empty()) {
        throw std::invalid_argument("holder_knife_experiment: segment-count list is empty");
    }
    int max_segments = 1;
    for (int n : n_segments_list) {
        if (n < 1) throw std::invalid_argument("holder_knife_experiment: segment counts must be >= 1");
        max_segments = std::max(max_segments, n);
    }
    // Sample the reference segment at the finest arc spacing of the ladder.
    const std::size_t segment_points =
        static_cast<std::size_t>(max_segments) * static_cast<std::size_t>(samples_per_arc) + 1;
    const PointCloud segment =
        sample_segment(Point{0.0, 0.0}, Point{length, 0.0}, segment_points);

    StabilityReport report;
    report.radius = reach;
    report.n_samples = n_samples;
    report.seed = stream.seed();
    report.threads = threads;

    for (std::size_t i = 0; i < n_segments_list.size(); ++i) {
        const KnifeBlade blade = knife_blade(length, reach, n_segments_list[i], samples_per_arc);
        const MeanEstimate l1 = projection_l1_distance(segment, blade.cloud, box, n_samples,
                                                       stream.substream(i), threads);
        StabilityRow row;
        row.eps = blade.hausdorff_to_segment;
        row.dist = l1.value;
        row.ratio = row.eps > 0.0 ? row.dist / std::sqrt(row.eps) : 0.0;
        row.std_error = l1.std_error;
        row.bound = 0.0;
        report.rows.push_back(row);
    }

    std::sort(report.rows.begin(), report.rows.end(),
              [](const StabilityRow& a, const StabilityRow& b) { return a.eps < b.eps; });
    std::vector<double> xs, ys;
    for (const auto& row : report.rows) {
        xs.push_back(row.eps);
        ys.push_back(row.dist);
    }
    report.fitted_slope = fit_loglog_slope(xs, ys);
    return report;
}

BoundCheck symdiff_bound_check(const PointCloud& cloud, double radius, double eps,
                               std::uint64_t samples, const RandomStream& stream, int threads) {
    if (!(eps > 0.0) || !(eps < radius)) {
        throw std::invalid_argument("symdiff_bound_check: need 0 < eps < r");
    }
    const PointCloud moved = jitter(cloud, eps, stream.substream(0));
    const VolumeEstimate sd =
        symdiff_volume(cloud, radius, moved, radius, samples, stream.substream(1), threads);

    BoundCheck check;
    check.measured = sd.value;
    check.std_error = sd.std_error;
    check.bound = 2.0 * static_cast<double>(covering_number(cloud, radius - eps)) *
                  sphere_measure(cloud.dim() - 1, 2.0 * radius + 2.0 * eps) * eps;
    check.pass = check.measured <= check.bound + 5.0 * check.std_error;
    return check;
}

BoundCheck boundary_area_check(const PointCloud& cloud, double radius, double h,
                               std::uint64_t samples, const RandomStream& stream, int threads) {
    if (!(h > 0.0) || !(h < radius / 10.0)) {
        throw std::invalid_argument("boundary_area_check: need 0 < h < r/10");
    }
    const VolumeEstimate est = boundary_area_estimate(cloud, radius, h, samples, stream, threads);

    BoundCheck check;
    check.measured = est.value;
    check.std_error = est.std_error;
    check.bound = static_cast<double>(covering_number(cloud, radius)) *
                  sphere_measure(cloud.dim() - 1, 2.0 * radius);
    check.pass = check.measured <= check.bound + 5.0 * check.std_error;
    return check;
}

ConvexityReport convexity_and_gradient_check(const PointCloud& cloud, std::uint64_t trials,
                                             const RandomStream& stream) {
    if (trials < 1) throw std::invalid_argument("convexity_and_gradient_check: trials must be >= 1");
    const int dim = cloud.dim();
    const NearestIndex index(cloud);

    // Sample from the cloud's bounding box inflated by its diameter plus one.
    Point lo = cloud.point(0), hi = cloud.point(0);
    for (std::size_t i = 1; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (int d = 0; d < dim; ++d) {
            lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], p[d]);
            hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], p[d]);
        }
    }
    const double pad = diameter(cloud) + 1.0;
    for (int d = 0; d < dim; ++d) {
        lo[static_cast<std::size_t>(d)] -= pad;
        hi[static_cast<std::size_t>(d)] += pad;
    }
    const BoxRegion box(lo, hi);

    auto v = [&](const Point& x) {
        double norm2 = 0.0;
        for (double c : x) norm2 += c * c;
        const double d = index.nearest(x).distance;
        return norm2 - d * d;
    };

    ConvexityReport report;
    RandomStream rng = stream.substream(0);
    std::ostringstream counterexample;

    for (std::uint64_t t = 0; t < trials; ++t) {
        const Point x = box.sample(rng);
        const Point y = box.sample(rng);
        Point mid(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d) {
            mid[static_cast<std::size_t>(d)] =
                0.5 * (x[static_cast<std::size_t>(d)] + y[static_cast<std::size_t>(d)]);
        }
        ++report.convexity_trials;
        if (v(mid) > 0.5 * (v(x) + v(y)) + 1e-9) {
            ++report.convexity_violations;
            if (counterexample.str().empty()) {
                counterexample << "midpoint convexity violated at trial " << t;
            }
        }
    }

    // Gradient trials: central differences are meaningful only where the
    // projection is unique, so points too close to a Voronoi boundary are
    // filtered by the gap to the second-nearest point.
    const std::uint64_t gradient_target = std::max<std::uint64_t>(1, trials / 10);
    const double gap_filter = 1e-6;
    const double step = 1e-5;
    RandomStream grad_rng = stream.substream(1);
    std::uint64_t attempts = 0;
    while (report.gradient_trials < gradient_target && attempts < gradient_target * 100) {
        ++attempts;
        const Point x = box.sample(grad_rng);
        const auto hit = index.nearest(x);
        // Gap to the second-nearest cloud point, by linear scan.
        double second = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            if (i == hit.index) continue;
            second = std::min(second, euclidean_distance(x, cloud[i]));
        }
        if (cloud.size() > 1 && second - hit.distance <= gap_filter) continue;

        ++report.gradient_trials;
        const auto proj = cloud[hit.index];
        Point probe = x;
        bool bad = false;
        for (int d = 0; d < dim && !bad; ++d) {
            probe[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)] + step;
            const double up = v(probe);
            probe[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)] - step;
            const double down = v(probe);
            probe[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)];
            const double fd = (up - down) / (2.0 * step);
            if (std::abs(fd - 2.0 * proj[d]) > 1e-3) bad = true;
        }
        if (bad) {
            ++report.gradient_violations;
            if (counterexample.str().empty()) {
                counterexample << "finite-difference gradient mismatch near projection index "
                               << hit.index;
            }
        }
    }

    report.pass = report.convexity_violations == 0 && report.gradient_violations == 0;
    report.counterexample = counterexample.str();
    return report;
}

} // namespace tubemeasure
