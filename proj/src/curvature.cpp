#include "tubemeasure/curvature.hpp"

#include "tubemeasure/boundary_estimator.hpp"
#include "tubemeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubemeasure {

RadiiSchedule::RadiiSchedule(std::vector<double> r, int dim) : radii(std::move(r)), ambient_dim(dim) {
    if (dim < 1) throw std::invalid_argument("radii schedule: dimension must be positive");
    if (radii.size() != static_cast<std::size_t>(dim) + 1) {
        throw std::invalid_argument("radii schedule: need exactly dim+1 radii");
    }
    double prev = 0.0;
    for (double v : radii) {
        if (!(v > prev)) {
            throw std::invalid_argument("radii schedule: radii must be positive and strictly increasing");
        }
        prev = v;
    }
}

RadiiSchedule RadiiSchedule::geometric(double r0, int dim) {
    if (!(r0 > 0.0)) throw std::invalid_argument("radii schedule: r0 must be positive");
    std::vector<double> r(static_cast<std::size_t>(dim) + 1);
    const double g = std::pow(4.0, 1.0 / dim);
    double v = r0;
    for (auto& x : r) {
        x = v;
        v *= g;
    }
    return RadiiSchedule(std::move(r), dim);
}

namespace {

struct LuFactors {
    std::vector<double> lu; // row-major
    std::vector<int> pivot;
    std::size_t n = 0;
};

LuFactors lu_factor(std::vector<double> a, std::size_t n) {
    LuFactors f{std::move(a), std::vector<int>(n), n};
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        double best_abs = std::abs(f.lu[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(f.lu[r * n + col]);
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        f.pivot[col] = static_cast<int>(best);
        if (best != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(f.lu[col * n + c], f.lu[best * n + c]);
        }
        const double d = f.lu[col * n + col];
        if (d == 0.0) throw NumericalError("curvature solve: singular radius matrix");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = f.lu[r * n + col] / d;
            f.lu[r * n + col] = factor;
            for (std::size_t c = col + 1; c < n; ++c) {
                f.lu[r * n + c] -= factor * f.lu[col * n + c];
            }
        }
    }
    return f;
}

void lu_solve(const LuFactors& f, std::vector<double>& b) {
    const std::size_t n = f.n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = static_cast<std::size_t>(f.pivot[i]);
        if (p != i) std::swap(b[i], b[p]);
        for (std::size_t j = 0; j < i; ++j) b[i] -= f.lu[i * n + j] * b[j];
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) b[i] -= f.lu[i * n + j] * b[j];
        b[i] /= f.lu[i * n + i];
    }
}

double norm1(const std::vector<double>& a, std::size_t n) {
    double best = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double col = 0.0;
        for (std::size_t r = 0; r < n; ++r) col += std::abs(a[r * n + c]);
        best = std::max(best, col);
    }
    return best;
}

} // namespace

CurvatureProfile solve_curvature(const PointCloud& atoms,
                                 const std::vector<std::vector<double>>& mass_table,
                                 const RadiiSchedule& schedule) {
    const int n = schedule.ambient_dim;
    if (atoms.dim() != n) {
        throw std::invalid_argument("solve_curvature: cloud and schedule dimension mismatch");
    }
    const std::size_t rows = static_cast<std::size_t>(n) + 1;
    if (mass_table.size() != rows) {
        throw std::invalid_argument("solve_curvature: one mass row per radius required");
    }
    const std::size_t m = atoms.size();
    for (const auto& row : mass_table) {
        if (row.size() != m) {
            throw std::invalid_argument("solve_curvature: one mass per atom required");
        }
    }

    std::vector<double> a(rows * rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
            const int power = n - static_cast<int>(j);
            a[i * rows + j] = ball_volume(power) * std::pow(schedule.radii[i], power);
        }
    }

    const LuFactors f = lu_factor(a, rows);
    std::vector<double> inv_col(rows);
    std::vector<double> inv(rows * rows);
    for (std::size_t c = 0; c < rows; ++c) {
        std::fill(inv_col.begin(), inv_col.end(), 0.0);
        inv_col[c] = 1.0;
        lu_solve(f, inv_col);
        for (std::size_t r = 0; r < rows; ++r) inv[r * rows + c] = inv_col[r];
    }
    const double cond = norm1(a, rows) * norm1(inv, rows);
    if (!(cond <= 1e12)) {
        throw NumericalError("solve_curvature: radius schedule is numerically degenerate "
                             "(condition number above 1e12)");
    }

    std::vector<std::vector<double>> phi(rows, std::vector<double>(m, 0.0));
    std::vector<double> rhs(rows);
    for (std::size_t atom = 0; atom < m; ++atom) {
        for (std::size_t i = 0; i < rows; ++i) rhs[i] = mass_table[i][atom];
        lu_solve(f, rhs);
        for (std::size_t j = 0; j < rows; ++j) phi[j][atom] = rhs[j];
    }

    CurvatureProfile out;
    out.radii = schedule.radii;
    out.condition_number = cond;
    out.profiles.reserve(rows);
    for (std::size_t j = 0; j < rows; ++j) {
        out.profiles.push_back(DiscreteMeasure::from_cloud(atoms, phi[j], /*is_signed=*/true));
    }
    return out;
}

CurvatureProfile curvature_from_cloud(const PointCloud& cloud, const RadiiSchedule& schedule,
                                      std::uint64_t n_per_radius, const RandomStream& stream,
                                      int threads) {
    if (cloud.dim() != schedule.ambient_dim) {
        throw std::invalid_argument("curvature_from_cloud: cloud and schedule dimension mismatch");
    }
    const std::size_t rows = schedule.radii.size();
    std::vector<std::vector<double>> masses(rows, std::vector<double>(cloud.size(), 0.0));
    for (std::size_t i = 0; i < rows; ++i) {
        const auto est = estimate_boundary_measure(cloud, schedule.radii[i], n_per_radius,
                                                   stream.substream(i), threads);
        const double scale = est.offset_volume.value / static_cast<double>(est.total);
        for (std::size_t atom = 0; atom < cloud.size(); ++atom) {
            masses[i][atom] = static_cast<double>(est.counts[atom]) * scale;
        }
    }
    return solve_curvature(cloud, masses, schedule);
}

} // namespace tubemeasure
