#include "tubemeasure/measures.hpp"

#include "tubemeasure/errors.hpp"
#include "tubemeasure/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tubemeasure {

namespace {

// Lexicographic order on coordinate rows.
bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool coords_equal(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin());
}

} // namespace

DiscreteMeasure DiscreteMeasure::from_atoms(int dim, std::vector<std::pair<Point, double>> atoms,
                                            bool is_signed) {
    if (dim <= 0) throw std::invalid_argument("measure dimension must be positive");
    for (const auto& [loc, w] : atoms) {
        if (static_cast<int>(loc.size()) != dim) {
            throw std::invalid_argument("atom dimension mismatch");
        }
        for (double c : loc) {
            if (!std::isfinite(c)) throw std::invalid_argument("atom coordinates must be finite");
        }
        if (!std::isfinite(w)) throw std::invalid_argument("atom weight must be finite");
        if (!is_signed && w < 0.0) {
            throw std::invalid_argument("negative weight in unsigned measure");
        }
    }

    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Point& pa = atoms[a].first;
        const Point& pb = atoms[b].first;
        if (pa != pb) return pa < pb;
        return a < b;
    });

    DiscreteMeasure m;
    m.dim_ = dim;
    m.signed_ = is_signed;
    for (std::size_t k = 0; k < order.size();) {
        const Point& loc = atoms[order[k]].first;
        double w = 0.0;
        std::size_t j = k;
        while (j < order.size() && atoms[order[j]].first == loc) {
            w += atoms[order[j]].second;
            ++j;
        }
        m.locations_.insert(m.locations_.end(), loc.begin(), loc.end());
        m.weights_.push_back(w);
        k = j;
    }
    m.count_ = m.weights_.size();
    return m;
}

DiscreteMeasure DiscreteMeasure::from_cloud(const PointCloud& cloud,
                                            const std::vector<double>& weights, bool is_signed) {
    if (weights.size() != cloud.size()) {
        throw std::invalid_argument("one weight per cloud point required");
    }
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto pa = cloud[a];
        auto pb = cloud[b];
        if (!coords_equal(pa, pb)) return lex_less(pa, pb);
        return a < b;
    });

    DiscreteMeasure m;
    m.dim_ = cloud.dim();
    m.signed_ = is_signed;
    for (std::size_t k = 0; k < order.size();) {
        auto loc = cloud[order[k]];
        double w = 0.0;
        std::size_t j = k;
        while (j < order.size() && coords_equal(cloud[order[j]], loc)) {
            w += weights[order[j]];
            ++j;
        }
        if (!is_signed && w < 0.0) {
            throw std::invalid_argument("negative weight in unsigned measure");
        }
        m.locations_.insert(m.locations_.end(), loc.begin(), loc.end());
        m.weights_.push_back(w);
        k = j;
    }
    m.count_ = m.weights_.size();
    return m;
}

double DiscreteMeasure::total_mass() const {
    double acc = 0.0;
    for (double w : weights_) acc += w;
    return acc;
}

PiecewiseMeasure::PiecewiseMeasure(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("measure dimension must be positive");
}

void PiecewiseMeasure::add_atom(Point location, double weight) {
    if (static_cast<int>(location.size()) != dim_) {
        throw std::invalid_argument("atom dimension mismatch");
    }
    if (weight < 0.0) throw std::invalid_argument("atom weight must be non-negative");
    atoms_.emplace_back(std::move(location), weight);
}

void PiecewiseMeasure::add_segment(Point a, Point b, double density) {
    if (static_cast<int>(a.size()) != dim_ || static_cast<int>(b.size()) != dim_) {
        throw std::invalid_argument("segment dimension mismatch");
    }
    if (density < 0.0) throw std::invalid_argument("segment density must be non-negative");
    segments_.push_back({std::move(a), std::move(b), density});
}

double polygon_area(const std::vector<Point>& vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    double twice = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Point& p = vertices[i];
        const Point& q = vertices[(i + 1) % vertices.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * twice;
}

namespace {

void check_convex_ccw(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        const Point& c = v[(i + 2) % n];
        const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (cross <= 0.0) {
            throw std::invalid_argument("polygon must be strictly convex and counter-clockwise");
        }
    }
}

// Sutherland-Hodgman clip of a convex polygon against an axis-aligned cell.
double clipped_area(const std::vector<Point>& poly, double x0, double x1, double y0, double y1) {
    std::vector<Point> cur = poly;
    auto clip = [&](auto inside, auto intersect) {
        std::vector<Point> next;
        const std::size_t n = cur.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = cur[i];
            const Point& b = cur[(i + 1) % n];
            const bool ia = inside(a);
            const bool ib = inside(b);
            if (ia) next.push_back(a);
            if (ia != ib) next.push_back(intersect(a, b));
        }
        cur = std::move(next);
    };
    auto cut_x = [](const Point& a, const Point& b, double x) {
        const double t = (x - a[0]) / (b[0] - a[0]);
        return Point{x, a[1] + t * (b[1] - a[1])};
    };
    auto cut_y = [](const Point& a, const Point& b, double y) {
        const double t = (y - a[1]) / (b[1] - a[1]);
        return Point{a[0] + t * (b[0] - a[0]), y};
    };
    clip([&](const Point& p) { return p[0] >= x0; },
         [&](const Point& a, const Point& b) { return cut_x(a, b, x0); });
    if (cur.empty()) return 0.0;
    clip([&](const Point& p) { return p[0] <= x1; },
         [&](const Point& a, const Point& b) { return cut_x(a, b, x1); });
    if (cur.empty()) return 0.0;
    clip([&](const Point& p) { return p[1] >= y0; },
         [&](const Point& a, const Point& b) { return cut_y(a, b, y0); });
    if (cur.empty()) return 0.0;
    clip([&](const Point& p) { return p[1] <= y1; },
         [&](const Point& a, const Point& b) { return cut_y(a, b, y1); });
    if (cur.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const Point& p = cur[i];
        const Point& q = cur[(i + 1) % cur.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return std::abs(0.5 * twice);
}

} // namespace

void PiecewiseMeasure::add_region(std::vector<Point> vertices, double density) {
    if (dim_ != 2) throw std::invalid_argument("polygonal regions are 2-D only");
    for (const Point& p : vertices) {
        if (p.size() != 2) throw std::invalid_argument("region vertex dimension mismatch");
    }
    check_convex_ccw(vertices);
    if (density < 0.0) throw std::invalid_argument("region density must be non-negative");
    regions_.push_back({std::move(vertices), density});
}

double PiecewiseMeasure::total_mass() const {
    double acc = 0.0;
    for (const auto& [loc, w] : atoms_) acc += w;
    for (const auto& s : segments_) {
        acc += s.density * euclidean_distance(s.a, s.b);
    }
    for (const auto& r : regions_) acc += r.density * polygon_area(r.vertices);
    return acc;
}

DiscreteMeasure PiecewiseMeasure::discretize(int bins_per_segment) const {
    if (bins_per_segment < 1) {
        throw std::invalid_argument("bins_per_segment must be at least 1");
    }
    std::vector<std::pair<Point, double>> atoms = atoms_;

    for (const auto& s : segments_) {
        const double len = euclidean_distance(s.a, s.b);
        const double bin_mass = s.density * len / bins_per_segment;
        for (int k = 0; k < bins_per_segment; ++k) {
            const double t = (k + 0.5) / bins_per_segment;
            Point mid(dim_);
            for (int d = 0; d < dim_; ++d) mid[d] = s.a[d] + t * (s.b[d] - s.a[d]);
            atoms.emplace_back(std::move(mid), bin_mass);
        }
    }

    for (const auto& r : regions_) {
        double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
        double x1 = -x0, y1 = -x0;
        for (const Point& p : r.vertices) {
            x0 = std::min(x0, p[0]);
            x1 = std::max(x1, p[0]);
            y0 = std::min(y0, p[1]);
            y1 = std::max(y1, p[1]);
        }
        const int g = bins_per_segment;
        const double dx = (x1 - x0) / g;
        const double dy = (y1 - y0) / g;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) {
                const double cx0 = x0 + i * dx, cy0 = y0 + j * dy;
                const double a = clipped_area(r.vertices, cx0, cx0 + dx, cy0, cy0 + dy);
                if (a > 0.0) {
                    atoms.emplace_back(Point{cx0 + 0.5 * dx, cy0 + 0.5 * dy}, r.density * a);
                }
            }
        }
    }
    return DiscreteMeasure::from_atoms(dim_, std::move(atoms));
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

struct UnionSupport {
    std::vector<double> coords; // row-major, n rows
    std::vector<double> net;    // mu weight minus nu weight per row
    std::size_t n = 0;
    int dim = 0;
};

UnionSupport merge_supports(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("measure dimension mismatch");
    UnionSupport u;
    u.dim = mu.dim();
    std::vector<std::pair<Point, double>> rows;
    rows.reserve(mu.size() + nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        auto l = mu.location(i);
        rows.emplace_back(Point(l.begin(), l.end()), mu.weight(i));
    }
    for (std::size_t i = 0; i < nu.size(); ++i) {
        auto l = nu.location(i);
        rows.emplace_back(Point(l.begin(), l.end()), -nu.weight(i));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < rows.size();) {
        double w = 0.0;
        std::size_t j = k;
        while (j < rows.size() && rows[j].first == rows[k].first) {
            w += rows[j].second;
            ++j;
        }
        if (w != 0.0) {
            u.coords.insert(u.coords.end(), rows[k].first.begin(), rows[k].first.end());
            u.net.push_back(w);
        }
        k = j;
    }
    u.n = u.net.size();
    return u;
}

std::vector<double> pairwise_distances(const UnionSupport& u) {
    std::vector<double> d(u.n * u.n, 0.0);
    for (std::size_t i = 0; i < u.n; ++i) {
        std::span<const double> pi{u.coords.data() + i * u.dim, static_cast<std::size_t>(u.dim)};
        for (std::size_t j = i + 1; j < u.n; ++j) {
            std::span<const double> pj{u.coords.data() + j * u.dim,
                                       static_cast<std::size_t>(u.dim)};
            const double dist = euclidean_distance(pi, pj);
            d[i * u.n + j] = dist;
            d[j * u.n + i] = dist;
        }
    }
    return d;
}

struct BlInner {
    double value = 0.0;
    double slope = 0.0; // derivative of the flow value w.r.t. t
};

// Value of the inner problem at Lipschitz budget t (sup-norm budget 1 - t),
// through its min-cost-flow dual on the support plus one virtual node.
BlInner bl_inner(const UnionSupport& u, const std::vector<double>& dist, double t) {
    const std::size_t n = u.n;
    const std::size_t v = n + 1; // last node absorbs the sup-norm constraint
    std::vector<double> supply(v, 0.0);
    double net_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        supply[i] = u.net[i];
        net_total += u.net[i];
    }
    supply[n] = -net_total;

    std::vector<double> cost(v * v, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) cost[i * v + j] = t * dist[i * n + j];
        }
        cost[i * v + n] = 1.0 - t;
        cost[n * v + i] = 1.0 - t;
    }

    TransportPlan plan = min_cost_transport(supply, cost);
    BlInner out;
    out.value = plan.cost;
    double transported = 0.0, absorbed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            transported += plan.flow[i * v + j] * dist[i * n + j];
        }
        absorbed += plan.flow[i * v + n] + plan.flow[n * v + i];
    }
    out.slope = transported - absorbed;
    return out;
}

} // namespace

double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    UnionSupport u = merge_supports(mu, nu);
    if (u.n == 0) return 0.0;
    const std::vector<double> dist = pairwise_distances(u);

    // The distance is max_t g(t) with g concave piecewise linear; bracket the
    // maximizer by sign of the supergradient and cut with tangent intersections.
    double a = 0.0, b = 1.0;
    BlInner ga = bl_inner(u, dist, a);
    BlInner gb = bl_inner(u, dist, b);
    double best = std::max(ga.value, gb.value);
    if (ga.slope <= 0.0) return ga.value;
    if (gb.slope >= 0.0) return gb.value;

    for (int iter = 0; iter < 200 && b - a > 1e-14; ++iter) {
        double t = ((gb.value - gb.slope * b) - (ga.value - ga.slope * a)) / (ga.slope - gb.slope);
        if (!(t > a && t < b)) t = 0.5 * (a + b);
        // The tangent intersection caps the maximum on [a, b].
        const double cap = ga.value + ga.slope * (t - a);
        if (cap - best <= 1e-12 * std::max(1.0, best)) break;
        BlInner gt = bl_inner(u, dist, t);
        best = std::max(best, gt.value);
        if (gt.slope > 0.0) {
            if (t == a) break;
            a = t;
            ga = gt;
        } else if (gt.slope < 0.0) {
            if (t == b) break;
            b = t;
            gb = gt;
        } else {
            return gt.value;
        }
    }
    return best;
}

double w1_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.is_signed() || nu.is_signed()) {
        throw std::invalid_argument("w1_distance requires unsigned measures");
    }
    const double mass_mu = mu.total_mass();
    const double mass_nu = nu.total_mass();
    if (!(mass_mu > 0.0) || !(mass_nu > 0.0)) {
        throw std::invalid_argument("w1_distance requires positive total mass");
    }
    if (std::abs(mass_mu - mass_nu) > 1e-9 * std::max({1.0, mass_mu, mass_nu})) {
        throw std::invalid_argument("w1_distance requires equal total masses");
    }

    UnionSupport u = merge_supports(mu, nu);
    if (u.n == 0) return 0.0;
    // Remove the residual imbalance (within tolerance) so the flow is feasible.
    double net_total = 0.0;
    for (double w : u.net) net_total += w;
    u.net[0] -= net_total;

    const std::vector<double> dist = pairwise_distances(u);
    TransportPlan plan = min_cost_transport(u.net, dist);
    return plan.cost;
}

} // namespace tubemeasure
