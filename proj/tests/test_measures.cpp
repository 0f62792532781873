#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tubemeasure/measures.hpp"
#include "tubemeasure/nn_index.hpp"
#include "tubemeasure/random.hpp"
#include "tubemeasure/transport.hpp"

using namespace tubemeasure;

namespace {

constexpr double kPi = 3.14159265358979323846;

DiscreteMeasure dirac(Point x, double w = 1.0) {
    const int dim = static_cast<int>(x.size());
    return DiscreteMeasure::from_atoms(dim, {{std::move(x), w}});
}

// --- independent oracle: vertex enumeration of the bounded-Lipschitz LP ---
//
// Variables z = (f_1..f_m, L, C); constraints |f_i - f_j| <= L d_ij,
// |f_i| <= C, L + C <= 1, L >= 0, C >= 0. The optimum sits at a vertex,
// i.e. at some m+2 active constraints; enumerate all of them.

struct LinCon {
    std::vector<double> g;
    double h;
};

bool gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& out) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-10) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t j = i + 1; j < n; ++j) v -= a[i][j] * out[j];
        out[i] = v / a[i][i];
    }
    return true;
}

double bl_vertex_oracle(const std::vector<Point>& pts, const std::vector<double>& w) {
    const std::size_t m = pts.size();
    const std::size_t nv = m + 2; // f..., L, C
    std::vector<LinCon> cons;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = euclidean_distance(pts[i], pts[j]);
            LinCon c1{std::vector<double>(nv, 0.0), 0.0};
            c1.g[i] = 1.0;
            c1.g[j] = -1.0;
            c1.g[m] = -d;
            cons.push_back(c1);
            LinCon c2{std::vector<double>(nv, 0.0), 0.0};
            c2.g[i] = -1.0;
            c2.g[j] = 1.0;
            c2.g[m] = -d;
            cons.push_back(c2);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        LinCon up{std::vector<double>(nv, 0.0), 0.0};
        up.g[i] = 1.0;
        up.g[m + 1] = -1.0;
        cons.push_back(up);
        LinCon dn{std::vector<double>(nv, 0.0), 0.0};
        dn.g[i] = -1.0;
        dn.g[m + 1] = -1.0;
        cons.push_back(dn);
    }
    {
        LinCon budget{std::vector<double>(nv, 0.0), 1.0};
        budget.g[m] = 1.0;
        budget.g[m + 1] = 1.0;
        cons.push_back(budget);
        LinCon lpos{std::vector<double>(nv, 0.0), 0.0};
        lpos.g[m] = -1.0;
        cons.push_back(lpos);
        LinCon cpos{std::vector<double>(nv, 0.0), 0.0};
        cpos.g[m + 1] = -1.0;
        cons.push_back(cpos);
    }

    double best = 0.0; // z = 0 is feasible
    std::vector<std::size_t> pick(nv);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    const std::size_t total = cons.size();
    for (;;) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t idx : pick) {
            a.push_back(cons[idx].g);
            b.push_back(cons[idx].h);
        }
        std::vector<double> z;
        if (gauss_solve(std::move(a), std::move(b), z)) {
            bool feasible = true;
            for (const auto& c : cons) {
                double lhs = 0.0;
                for (std::size_t v = 0; v < nv; ++v) lhs += c.g[v] * z[v];
                if (lhs > c.h + 1e-9) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                double obj = 0.0;
                for (std::size_t i = 0; i < m; ++i) obj += w[i] * z[i];
                best = std::max(best, obj);
            }
        }
        // next combination
        std::size_t i = nv;
        bool done = true;
        while (i-- > 0) {
            if (pick[i] != i + total - nv) {
                ++pick[i];
                for (std::size_t j = i + 1; j < nv; ++j) pick[j] = pick[j - 1] + 1;
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return best;
}

DiscreteMeasure random_measure(RandomStream& rng, std::size_t atoms, int dim, double mass_scale) {
    std::vector<std::pair<Point, double>> v;
    for (std::size_t i = 0; i < atoms; ++i) {
        Point p(dim);
        for (auto& c : p) c = 2.0 * rng.next_double() - 1.0;
        v.emplace_back(std::move(p), mass_scale * (0.1 + rng.next_double()));
    }
    return DiscreteMeasure::from_atoms(dim, std::move(v));
}

} // namespace

TEST_CASE("discrete measure construction merges duplicates") {
    auto m = DiscreteMeasure::from_atoms(2, {{{1.0, 2.0}, 0.5}, {{0.0, 0.0}, 1.0}, {{1.0, 2.0}, 0.25}});
    CHECK(m.size() == 2);
    CHECK(m.total_mass() == doctest::Approx(1.75));
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms(2, {{{0.0, 0.0}, -1.0}}), std::invalid_argument);
    auto s = DiscreteMeasure::from_atoms(1, {{{0.0}, -1.0}}, /*is_signed=*/true);
    CHECK(s.total_mass() == doctest::Approx(-1.0));
}

TEST_CASE("total mass of piecewise measures") {
    CHECK(dirac({0.3, 0.4}).total_mass() == 1.0);

    const double r = 0.2;
    PiecewiseMeasure seg(2);
    seg.add_atom({0.0, 0.0}, 0.5 * kPi * r * r);
    seg.add_atom({1.0, 0.0}, 0.5 * kPi * r * r);
    seg.add_segment({0.0, 0.0}, {1.0, 0.0}, 2.0 * r);
    CHECK(seg.total_mass() == doctest::Approx(0.525664).epsilon(1e-5));

    PiecewiseMeasure plain(2);
    plain.add_segment({0.0, 0.0}, {1.0, 0.0}, 3.0);
    CHECK(plain.total_mass() == doctest::Approx(3.0));
}

TEST_CASE("discretize splits segments and conserves mass") {
    SUBCASE("pure atoms are unchanged") {
        PiecewiseMeasure m(2);
        m.add_atom({0.25, 0.75}, 2.0);
        const auto d = m.discretize(7);
        CHECK(d.size() == 1);
        CHECK(d.weight(0) == 2.0);
    }

    SUBCASE("unit segment, density 2r, 4 bins") {
        const double r = 0.25;
        PiecewiseMeasure m(1);
        m.add_segment({0.0}, {1.0}, 2.0 * r);
        const auto d = m.discretize(4);
        REQUIRE(d.size() == 4);
        const double expect[] = {0.125, 0.375, 0.625, 0.875};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(d.location(i)[0] == doctest::Approx(expect[i]));
            CHECK(d.weight(i) == doctest::Approx(r / 2.0));
        }
    }

    SUBCASE("polygon rasterization conserves mass") {
        PiecewiseMeasure m(2);
        m.add_region({{0.0, 0.0}, {2.0, 0.0}, {1.5, 1.5}, {0.2, 1.0}}, 0.7);
        m.add_segment({0.0, 0.0}, {0.3, 2.0}, 1.3);
        m.add_atom({5.0, 5.0}, 0.11);
        for (int bins : {1, 3, 10}) {
            CHECK(m.discretize(bins).total_mass() == doctest::Approx(m.total_mass()).epsilon(1e-12));
        }
    }

    SUBCASE("random piecewise measures conserve mass") {
        RandomStream rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            PiecewiseMeasure m(2);
            for (int a = 0; a < 3; ++a) {
                m.add_atom({rng.next_double(), rng.next_double()}, rng.next_double());
            }
            for (int s = 0; s < 2; ++s) {
                m.add_segment({rng.next_double(), rng.next_double()},
                              {1.0 + rng.next_double(), rng.next_double()}, rng.next_double());
            }
            const int bins = 1 + static_cast<int>(rng.next_below(12));
            CHECK(m.discretize(bins).total_mass() ==
                  doctest::Approx(m.total_mass()).epsilon(1e-12));
        }
    }
}

TEST_CASE("bl distance closed forms") {
    CHECK(bl_distance(dirac({0.0, 0.0}), dirac({0.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-12));
    for (double d : {0.1, 1.0, 10.0}) {
        const double got = bl_distance(dirac({0.0}), dirac({d}));
        CHECK(std::abs(got - 2.0 * d / (d + 2.0)) < 1e-9);
    }
    // identical three-atom measures
    auto m = DiscreteMeasure::from_atoms(2, {{{0, 0}, 1}, {{1, 0}, 2}, {{0, 1}, 0.5}});
    CHECK(bl_distance(m, m) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bl distance matches the vertex-enumeration oracle") {
    RandomStream rng(19);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Point> pts;
        std::vector<double> w;
        for (int i = 0; i < 3; ++i) {
            pts.push_back({3.0 * rng.next_double() - 1.0, 3.0 * rng.next_double() - 1.0});
            w.push_back(2.0 * rng.next_double() - 1.0);
        }
        std::vector<std::pair<Point, double>> mu_atoms, nu_atoms;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (w[i] >= 0.0) mu_atoms.emplace_back(pts[i], w[i]);
            else nu_atoms.emplace_back(pts[i], -w[i]);
        }
        if (mu_atoms.empty() || nu_atoms.empty()) continue;
        const auto mu = DiscreteMeasure::from_atoms(2, mu_atoms);
        const auto nu = DiscreteMeasure::from_atoms(2, nu_atoms);
        const double got = bl_distance(mu, nu);
        const double want = bl_vertex_oracle(pts, w);
        CHECK(std::abs(got - want) < 1e-6);
    }
}

TEST_CASE("w1 distance closed forms and the permutation oracle") {
    CHECK(w1_distance(dirac({0.0, 0.0}), dirac({3.0, 4.0})) == doctest::Approx(5.0));
    auto m = DiscreteMeasure::from_atoms(1, {{{0.0}, 1.0}, {{2.0}, 1.0}});
    CHECK(w1_distance(m, m) == doctest::Approx(0.0));

    RandomStream rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 1 + rng.next_below(5);
        std::vector<Point> xs, ys;
        std::vector<std::pair<Point, double>> mu_atoms, nu_atoms;
        for (std::size_t i = 0; i < k; ++i) {
            xs.push_back({rng.next_double(), rng.next_double()});
            ys.push_back({rng.next_double(), rng.next_double()});
            mu_atoms.emplace_back(xs.back(), 1.0 / k);
            nu_atoms.emplace_back(ys.back(), 1.0 / k);
        }
        const double got = w1_distance(DiscreteMeasure::from_atoms(2, mu_atoms),
                                       DiscreteMeasure::from_atoms(2, nu_atoms));
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double best = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                cost += euclidean_distance(xs[i], ys[perm[i]]) / k;
            }
            best = std::min(best, cost);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(std::abs(got - best) < 1e-9);
    }
}

TEST_CASE("w1 preconditions") {
    auto a = dirac({0.0}, 1.0);
    auto b = dirac({1.0}, 2.0);
    CHECK_THROWS_AS(w1_distance(a, b), std::invalid_argument);
    auto s = DiscreteMeasure::from_atoms(1, {{{0.0}, -1.0}, {{1.0}, 2.0}}, true);
    CHECK_THROWS_AS(w1_distance(s, dirac({0.0})), std::invalid_argument);
}

TEST_CASE("metric properties on random measures") {
    RandomStream rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        auto a = random_measure(rng, 1 + rng.next_below(4), 2, 1.0);
        auto b = random_measure(rng, 1 + rng.next_below(4), 2, 1.0);
        auto c = random_measure(rng, 1 + rng.next_below(4), 2, 1.0);

        const double ab = bl_distance(a, b);
        const double ba = bl_distance(b, a);
        const double bc = bl_distance(b, c);
        const double ac = bl_distance(a, c);
        CHECK(std::abs(ab - ba) < 1e-9);
        CHECK(ac <= ab + bc + 1e-9);

        // general upper bound: total mass of the difference
        CHECK(ab <= a.total_mass() + b.total_mass() + 1e-9);
    }
}

TEST_CASE("bl is below w1 on probability measures with unit-diameter support") {
    RandomStream rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t k = 2 + rng.next_below(3);
        std::vector<std::pair<Point, double>> mu_atoms, nu_atoms;
        double wa = 0.0, wb = 0.0;
        std::vector<double> ma(k), mb(k);
        for (std::size_t i = 0; i < k; ++i) {
            ma[i] = 0.1 + rng.next_double();
            mb[i] = 0.1 + rng.next_double();
            wa += ma[i];
            wb += mb[i];
        }
        for (std::size_t i = 0; i < k; ++i) {
            // support inside a set of diameter <= 1
            mu_atoms.push_back({{0.5 * rng.next_double(), 0.5 * rng.next_double()}, ma[i] / wa});
            nu_atoms.push_back({{0.5 * rng.next_double(), 0.5 * rng.next_double()}, mb[i] / wb});
        }
        auto mu = DiscreteMeasure::from_atoms(2, mu_atoms);
        auto nu = DiscreteMeasure::from_atoms(2, nu_atoms);
        const double bl = bl_distance(mu, nu);
        const double w1 = w1_distance(mu, nu);
        CHECK(bl <= w1 + 1e-9);
        // equal masses: bl <= 2 min(total masses)
        CHECK(bl <= 2.0 + 1e-9);
    }
}

TEST_CASE("kantorovich duality gap on random instances") {
    RandomStream rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.next_below(6);
        std::vector<Point> pts(n);
        std::vector<double> supply(n, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pts[i] = {rng.next_double(), rng.next_double()};
            supply[i] = 2.0 * rng.next_double() - 1.0;
            total += supply[i];
        }
        for (std::size_t i = 0; i < n; ++i) supply[i] -= total / n;

        std::vector<double> cost(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cost[i * n + j] = euclidean_distance(pts[i], pts[j]);
            }
        }
        const auto plan = min_cost_transport(supply, cost);
        double dual = 0.0;
        for (std::size_t i = 0; i < n; ++i) dual += supply[i] * plan.potential[i];
        CHECK(std::abs(plan.cost - dual) < 1e-6);
        // dual feasibility: the potential is 1-Lipschitz on the support
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(plan.potential[i] - plan.potential[j] <= cost[i * n + j] + 1e-9);
            }
        }
    }
}

TEST_CASE("pushforward contract: d_bl(f#mu, g#mu) <= sum mu_i |f(x_i)-g(x_i)|") {
    RandomStream rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mu = random_measure(rng, 6, 2, 0.5);
        std::vector<double> flat_a, flat_b;
        for (int i = 0; i < 5; ++i) {
            flat_a.push_back(2.0 * rng.next_double() - 1.0);
            flat_a.push_back(2.0 * rng.next_double() - 1.0);
            flat_b.push_back(2.0 * rng.next_double() - 1.0);
            flat_b.push_back(2.0 * rng.next_double() - 1.0);
        }
        const PointCloud ka(2, flat_a);
        const PointCloud kb(2, flat_b);
        const NearestIndex ia(ka);
        const NearestIndex ib(kb);

        std::vector<std::pair<Point, double>> fa, ga;
        double rhs = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const auto x = mu.location(i);
            const auto pa = ka[ia.nearest(x).index];
            const auto pb = kb[ib.nearest(x).index];
            fa.push_back({Point(pa.begin(), pa.end()), mu.weight(i)});
            ga.push_back({Point(pb.begin(), pb.end()), mu.weight(i)});
            rhs += mu.weight(i) * euclidean_distance(pa, pb);
        }
        const double lhs = bl_distance(DiscreteMeasure::from_atoms(2, fa),
                                       DiscreteMeasure::from_atoms(2, ga));
        CHECK(lhs <= rhs + 1e-9);
    }
}
