#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tubemeasure/geometry.hpp"
#include "tubemeasure/offset_sampler.hpp"
#include "tubemeasure/oracles.hpp"

using namespace tubemeasure;

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

TEST_CASE("segment measure values") {
    const auto m = segment_measure({0.0, 0.0}, {1.0, 0.0}, 0.2);
    REQUIRE(m.atoms().size() == 2);
    for (const auto& [loc, w] : m.atoms()) {
        CHECK(w == doctest::Approx(0.0628319).epsilon(1e-5));
    }
    REQUIRE(m.segments().size() == 1);
    CHECK(m.segments()[0].density * 1.0 == doctest::Approx(0.4));
    CHECK(m.total_mass() == doctest::Approx(0.525664).epsilon(1e-5));

    CHECK_THROWS_AS(segment_measure({1.0, 1.0}, {1.0, 1.0}, 0.2), std::invalid_argument);

    // endpoint/interior mass ratio vanishes as r -> 0
    double prev_ratio = 1e9;
    for (double r : {0.1, 0.01, 0.001}) {
        const auto s = segment_measure({0.0, 0.0}, {1.0, 0.0}, r);
        const double endpoint = 2.0 * s.atoms()[0].second;
        const double ratio = endpoint / (s.total_mass() - endpoint);
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio < 2e-3);
}

TEST_CASE("convex polygon measure follows the Steiner formula") {
    const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto m = convex_polygon_measure(square, 0.1);
    REQUIRE(m.atoms().size() == 4);
    for (const auto& [loc, w] : m.atoms()) {
        CHECK(w == doctest::Approx(0.00785398).epsilon(1e-5));
    }
    CHECK(m.total_mass() == doctest::Approx(1.4314159).epsilon(1e-6));

    SUBCASE("vertex atoms sum to pi r^2 for any convex polygon") {
        const std::vector<Point> penta{{0, 0}, {2, -0.3}, {2.5, 1}, {1, 2}, {-0.5, 0.9}};
        const double r = 0.07;
        const auto p = convex_polygon_measure(penta, r);
        double vertex_total = 0.0;
        for (const auto& [loc, w] : p.atoms()) vertex_total += w;
        CHECK(vertex_total == doctest::Approx(kPi * r * r).epsilon(1e-12));
    }

    SUBCASE("regular hexagon atoms are equal by symmetry") {
        std::vector<Point> hex;
        for (int k = 0; k < 6; ++k) {
            const double a = kPi / 3.0 * k;
            hex.push_back({std::cos(a), std::sin(a)});
        }
        const auto h = convex_polygon_measure(hex, 0.2);
        for (const auto& [loc, w] : h.atoms()) {
            CHECK(w == doctest::Approx(h.atoms()[0].second).epsilon(1e-12));
        }
    }

    SUBCASE("non-convex input is rejected") {
        const std::vector<Point> bad{{0, 0}, {2, 0}, {1, 0.2}, {2, 2}};
        CHECK_THROWS_AS(convex_polygon_measure(bad, 0.1), std::invalid_argument);
        // clockwise is rejected too
        const std::vector<Point> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
        CHECK_THROWS_AS(convex_polygon_measure(cw, 0.1), std::invalid_argument);
    }
}

TEST_CASE("knife blade geometry") {
    SUBCASE("closed-form Hausdorff distances") {
        const auto one = knife_blade(1.0, 1.0, 1, 16);
        CHECK(one.hausdorff_to_segment == doctest::Approx(0.1180340).epsilon(1e-6));
        const auto eight = knife_blade(1.0, 1.0, 8, 16);
        CHECK(eight.hausdorff_to_segment == doctest::Approx(0.0019512).epsilon(1e-4));
    }

    SUBCASE("bulge stays below the Taylor bound l^2/(8R)") {
        for (int nseg : {1, 2, 4, 8, 16, 32}) {
            for (double reach : {0.5, 1.0, 3.0}) {
                const auto blade = knife_blade(2.0, reach, nseg, 4);
                const double piece = 2.0 / nseg;
                CHECK(blade.hausdorff_to_segment <= piece * piece / (8.0 * reach) + 1e-12);
            }
        }
    }

    SUBCASE("the sampled blade hugs the segment") {
        const auto blade = knife_blade(1.0, 1.0, 4, 32);
        const PointCloud seg = sample_segment({0.0, 0.0}, {1.0, 0.0}, 4096);
        const double step = 0.3 / 32.0; // arc length / samples, rounded up
        CHECK(hausdorff_distance(blade.cloud, seg) <= blade.hausdorff_to_segment + step);
        // every blade point is above the segment by at most the bulge
        for (std::size_t i = 0; i < blade.cloud.size(); ++i) {
            const auto p = blade.cloud[i];
            CHECK(p[1] >= -1e-12);
            CHECK(p[1] <= blade.hausdorff_to_segment + 1e-12);
        }
    }

    SUBCASE("cloud size follows the sampling parameters") {
        const auto blade = knife_blade(1.0, 1.0, 5, 8);
        CHECK(blade.cloud.size() == 5 * 8 + 1);
    }
}

TEST_CASE("jitter stays within eps") {
    std::vector<double> flat;
    RandomStream gen(3);
    for (int i = 0; i < 40; ++i) flat.push_back(gen.next_double());
    const PointCloud cloud(2, flat);

    const auto same = jitter(cloud, 0.0, RandomStream(5));
    CHECK(hausdorff_distance(cloud, same) == 0.0);

    for (int trial = 0; trial < 100; ++trial) {
        const double eps = 0.001 + 0.05 * gen.next_double();
        const auto moved = jitter(cloud, eps, gen.substream(trial));
        CHECK(hausdorff_distance(cloud, moved) <= eps + 1e-12);
    }

    const PointCloud one(2, {0.5, 0.5});
    const auto moved = jitter(one, 0.25, RandomStream(7));
    CHECK(euclidean_distance(one[0], moved[0]) <= 0.25 + 1e-12);
}

TEST_CASE("oracle masses agree with Monte-Carlo offset volumes") {
    SUBCASE("segment") {
        const double r = 0.2;
        const auto oracle = segment_measure({0.0, 0.0}, {1.0, 0.0}, r);
        const auto cloud = sample_segment({0.0, 0.0}, {1.0, 0.0}, 800);
        const auto vol = offset_volume(cloud, r, 200000, RandomStream(11));
        CHECK(std::abs(vol.value - oracle.total_mass()) < 3.0 * vol.std_error + 2e-3);
    }

    SUBCASE("square") {
        const double r = 0.15;
        const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        const auto oracle = convex_polygon_measure(square, r);
        const auto cloud = sample_convex_polygon(square, 0.02, 0.04);
        const auto vol = offset_volume(cloud, r, 200000, RandomStream(13));
        CHECK(std::abs(vol.value - oracle.total_mass()) < 3.0 * vol.std_error + 5e-3);
    }
}

TEST_CASE("shape samplers") {
    const auto seg = sample_segment({0.0, 0.0}, {2.0, 0.0}, 5);
    CHECK(seg.size() == 5);
    CHECK(seg[4][0] == doctest::Approx(2.0));

    const auto circle = sample_circle({1.0, 1.0}, 0.5, 64);
    CHECK(circle.size() == 64);
    for (std::size_t i = 0; i < circle.size(); ++i) {
        CHECK(euclidean_distance(circle[i], Point{1.0, 1.0}) == doctest::Approx(0.5));
    }

    const auto square =
        sample_convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.25, 0.3);
    CHECK(square.size() > 16); // 16 boundary points plus an interior grid
    bool has_interior = false;
    for (std::size_t i = 0; i < square.size(); ++i) {
        const auto p = square[i];
        if (p[0] > 0.01 && p[0] < 0.99 && p[1] > 0.01 && p[1] < 0.99) has_interior = true;
    }
    CHECK(has_interior);
}
