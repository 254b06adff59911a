#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sstopo/errors.hpp"
#include "sstopo/fixtures.hpp"
#include "sstopo/intersection.hpp"

using namespace sstopo;

namespace {

BSplineSurface flat_patch(Point3 origin, Point3 du, Point3 dv) {
    return BSplineSurface(KnotVector({0, 0, 1, 1}, 1), KnotVector({0, 0, 1, 1}, 1),
                          {origin, origin + dv, origin + du, origin + du + dv});
}

// z = 0 over [0,1]^2 with x = u, y = v.
BSplineSurface ground() { return flat_patch(Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)); }

// x = 0.5, spanning y in [0,1], z in [-0.5,0.5].
BSplineSurface wall() { return flat_patch(Point3(0.5, 0, -0.5), Point3(0, 1, 0), Point3(0, 0, 1)); }

void check_sets_invariants(const IntersectionPointSets& s) {
    std::vector<bool> hit1(s.points1.size(), false);
    std::vector<bool> hit2(s.points2.size(), false);
    for (const auto& [i, j] : s.correspondences) {
        REQUIRE(i < s.points1.size());
        REQUIRE(j < s.points2.size());
        hit1[i] = true;
        hit2[j] = true;
    }
    CHECK(std::all_of(hit1.begin(), hit1.end(), [](bool b) { return b; }));
    CHECK(std::all_of(hit2.begin(), hit2.end(), [](bool b) { return b; }));
    for (const auto* pts : {&s.points1, &s.points2}) {
        for (std::size_t k = 1; k < pts->size(); ++k) {
            const auto& a = (*pts)[k - 1];
            const auto& b = (*pts)[k];
            CHECK(std::tie(a[0], a[1]) < std::tie(b[0], b[1]));
        }
    }
    for (const auto& bp : s.boxes) {
        CHECK(bp.rect1.diagonal() <= s.epsilon);
        CHECK(bp.rect2.diagonal() <= s.epsilon);
    }
}

}  // namespace

TEST_CASE("nonpositive epsilon is rejected") {
    CHECK_THROWS_AS(intersect_surfaces(ground(), wall(), 0.0), ConfigError);
    CHECK_THROWS_AS(intersect_surfaces(ground(), wall(), -1.0), ConfigError);
}

TEST_CASE("disjoint patches give empty sets") {
    const auto far = flat_patch(Point3(5, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0));
    const auto s = intersect_surfaces(ground(), far, 0.05);
    CHECK(s.empty());
    CHECK(s.points1.empty());
    CHECK(s.points2.empty());
    CHECK(s.correspondences.empty());
    CHECK_THROWS_AS(hausdorff_bound(s), EmptyInputError);
}

TEST_CASE("plane against a vertical wall") {
    const double eps = 0.02;
    const auto g = ground();
    const auto s = intersect_surfaces(g, wall(), eps);
    REQUIRE_FALSE(s.empty());
    check_sets_invariants(s);
    CHECK_FALSE(s.overlap_suspected);

    // Output points lie near the analytic preimage u = 0.5.
    const auto [b1, b2] = hausdorff_bound(s);
    CHECK(b1 == doctest::Approx(s.cell_diag1 / 2));
    CHECK(b2 == doctest::Approx(s.cell_diag2 / 2));
    for (const auto& p : s.points1) {
        CHECK(std::abs(p[0] - 0.5) <= b1 + 1e-12);
    }
    // Every analytic preimage point has an output point within one cell diagonal.
    for (int k = 0; k <= 200; ++k) {
        const Point2 q(0.5, k / 200.0);
        double best = 1e9;
        for (const auto& p : s.points1) {
            best = std::min(best, (p - q).norm());
        }
        CHECK(best <= s.cell_diag1 + 1e-12);
    }
    // On the wall the intersection is the line v = 0.5 (z = 0).
    for (const auto& p : s.points2) {
        CHECK(std::abs(p[1] - 0.5) <= b2 + 1e-12);
    }
}

TEST_CASE("plane against a saddle: both branches are found") {
    const auto pair = crossed_planes_pair();
    const auto s = intersect_surfaces(pair.first, pair.second, 0.02);
    check_sets_invariants(s);
    // The saddle z = xy vanishes on x = 0 and y = 0, i.e. u = 0.5 or v = 0.5.
    for (int k = 0; k <= 100; ++k) {
        for (const Point2& q : {Point2(0.5, k / 100.0), Point2(k / 100.0, 0.5)}) {
            double best = 1e9;
            for (const auto& p : s.points2) {
                best = std::min(best, (p - q).norm());
            }
            CHECK(best <= s.cell_diag2 + 1e-12);
        }
    }
}

TEST_CASE("square cells have half-diagonal bound h*sqrt(2)/2") {
    // Unit-square domains, eps chosen so terminal cells are squares of side 1/64.
    const auto s = intersect_surfaces(ground(), wall(), std::sqrt(2.0) / 64 + 1e-12);
    REQUIRE_FALSE(s.empty());
    const double h = 1.0 / 64;
    CHECK(s.cell_diag1 == doctest::Approx(h * std::sqrt(2.0)));
    CHECK(hausdorff_bound(s).first == doctest::Approx(h * std::sqrt(2.0) / 2));
}

TEST_CASE("subdivision depth stays within the log bound") {
    const double eps = 0.015;
    const auto pair = crossed_planes_pair();
    const auto s = intersect_surfaces(pair.first, pair.second, eps);
    REQUIRE_FALSE(s.boxes.empty());
    const auto check_depth = [&](const ParamRect& root, const ParamRect& cell) {
        const double du = std::log2(root.width() / cell.width());
        const double dv = std::log2(root.height() / cell.height());
        const int bound = static_cast<int>(std::ceil(std::log2(root.diagonal() / eps)));
        CHECK(std::lround(du) <= bound);
        CHECK(std::lround(dv) <= bound);
    };
    for (const auto& bp : s.boxes) {
        check_depth(s.domain1, bp.rect1);
        check_depth(s.domain2, bp.rect2);
    }
}

TEST_CASE("coincident patches stop at the epsilon floor and flag overlap") {
    const auto s = intersect_surfaces(ground(), ground(), 0.1);
    CHECK(s.overlap_suspected);
    check_sets_invariants(s);
    double area = 0.0;
    std::set<std::tuple<double, double, double, double>> cells;
    for (const auto& bp : s.boxes) {
        if (cells.emplace(bp.rect1.u_min, bp.rect1.u_max, bp.rect1.v_min, bp.rect1.v_max).second) {
            area += bp.rect1.area();
        }
    }
    CHECK(area == doctest::Approx(1.0));
}

TEST_CASE("terminal-pair cap protects against runaway overlap") {
    IntersectOptions opt;
    opt.epsilon = 0.005;
    opt.max_terminal_pairs = 1000;
    CHECK_THROWS_AS(intersect_surfaces(ground(), ground(), opt), ConfigError);
}

TEST_CASE("result does not depend on the number of workers") {
    const auto pair = two_cylinders_pair();
    IntersectOptions one;
    one.epsilon = 0.02;
    IntersectOptions four = one;
    four.threads = 4;
    const auto a = intersect_surfaces(pair.first, pair.second, one);
    const auto b = intersect_surfaces(pair.first, pair.second, four);
    const auto c = intersect_surfaces(pair.first, pair.second, four);
    CHECK(a.points1 == b.points1);
    CHECK(a.points2 == b.points2);
    CHECK(a.correspondences == b.correspondences);
    CHECK(b.points1 == c.points1);
    CHECK(b.correspondences == c.correspondences);
}

TEST_CASE("tangent contact is kept by the closed box test") {
    const auto pair = tangent_paraboloid_pair();
    const auto s = intersect_surfaces(pair.first, pair.second, 0.02);
    REQUIRE_FALSE(s.empty());
    check_sets_invariants(s);
    // Paraboloid domain maps (u, v) to x = 2u - 1, y = 2v - 1; contact at the center.
    for (const auto& p : s.points2) {
        CHECK((p - Point2(0.5, 0.5)).norm() <= s.cell_diag2);
    }
}
