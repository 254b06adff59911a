#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sstopo/errors.hpp"
#include "sstopo/partition.hpp"
#include "sstopo/synthetic.hpp"
#include "sstopo/two_step_mapper.hpp"

using namespace sstopo;

namespace {

// Graph whose node k holds the points {k, k+1} of a chain, so consecutive
// nodes share exactly one point.
MapperGraph chain(std::size_t n, bool closed) {
    MapperGraph g;
    const std::size_t count = closed ? n : n + 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<PointIndex> pts{static_cast<PointIndex>(k), static_cast<PointIndex>((k + 1) % count)};
        std::sort(pts.begin(), pts.end());
        g.nodes.push_back({pts, {static_cast<int>(k)}});
    }
    rebuild_edges(g);
    return g;
}

// Centre node 0 sharing one point with each of `arms` single-node arms.
MapperGraph star(std::size_t arms) {
    MapperGraph g;
    std::vector<PointIndex> centre;
    for (std::size_t a = 0; a < arms; ++a) {
        centre.push_back(static_cast<PointIndex>(2 * a));
    }
    centre.push_back(static_cast<PointIndex>(2 * arms));
    g.nodes.push_back({centre, {0}});
    for (std::size_t a = 0; a < arms; ++a) {
        g.nodes.push_back({{static_cast<PointIndex>(2 * a), static_cast<PointIndex>(2 * a + 1)}, {1}});
    }
    rebuild_edges(g);
    return g;
}

void check_partition_invariants(const PartitionResult& part, std::size_t cloud_size) {
    std::vector<int> owner(cloud_size, 0);
    for (const auto& s : part.segments) {
        for (const auto i : s.point_indices) {
            ++owner[i];
        }
    }
    for (const auto i : part.removed_boundary_points) {
        CHECK(owner[i] == 0);
    }
    for (const auto i : part.removed_singular_points) {
        CHECK(owner[i] == 0);
    }
    std::set<PointIndex> removed(part.removed_boundary_points.begin(), part.removed_boundary_points.end());
    removed.insert(part.removed_singular_points.begin(), part.removed_singular_points.end());
    for (std::size_t i = 0; i < cloud_size; ++i) {
        CHECK(owner[i] <= 1);
        CHECK((owner[i] == 1 || removed.count(static_cast<PointIndex>(i)) == 1));
    }
}

}  // namespace

TEST_CASE("kind names round-trip") {
    for (const auto k : {SegmentKind::open, SegmentKind::closed, SegmentKind::isolated, SegmentKind::anomalous}) {
        CHECK(segment_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(segment_kind_from_string("spiral"), FormatError);
}

TEST_CASE("approximate boundary set") {
    const std::vector<Point2> pts{{0.05, 0.5}, {0.5, 0.5}, {0.5, 0.95}, {0.95, 0.2}, {0.5, 0.02}, {0.11, 0.89}};
    const BoundarySpec spec{0, 1, 0, 1, 0.1};
    CHECK(approximate_boundary_set(pts, spec) == std::vector<PointIndex>{0, 2, 3, 4});

    BoundarySpec wide = spec;
    wide.delta = 0.5;
    CHECK_THROWS_AS(approximate_boundary_set(pts, wide), ConfigError);
    wide.delta = 0.0;
    CHECK_THROWS_AS(approximate_boundary_set(pts, wide), ConfigError);
}

TEST_CASE("periodic axes keep both seam bands") {
    const std::vector<Point2> pts{{0.05, 0.5}, {0.97, 0.5}, {0.5, 0.5}};
    BoundarySpec spec{0, 1, 0, 1, 0.1};
    spec.periodic_u = true;
    CHECK(approximate_boundary_set(pts, spec) == std::vector<PointIndex>{0, 1});
}

TEST_CASE("characteristic nodes") {
    SUBCASE("path without boundary points") {
        const auto g = chain(5, false);
        const auto c = classify_characteristic_nodes(g, std::vector<PointIndex>{});
        CHECK(c.boundary_nodes.empty());
        CHECK(c.singular_nodes.empty());
    }
    SUBCASE("star centre is singular") {
        const auto g = star(4);
        const auto c = classify_characteristic_nodes(g, std::vector<PointIndex>{});
        CHECK(c.singular_nodes == std::vector<NodeId>{0});
    }
    SUBCASE("boundary points mark their nodes") {
        const auto g = chain(5, false);
        const auto c = classify_characteristic_nodes(g, std::vector<PointIndex>{0, 5});
        CHECK(c.boundary_nodes == std::vector<NodeId>{0, 4});
    }
}

TEST_CASE("partition shapes") {
    SUBCASE("path") {
        const auto g = chain(5, false);
        const auto part = partition(g, {});
        REQUIRE(part.segments.size() == 1);
        CHECK(part.segments[0].kind == SegmentKind::open);
        CHECK(part.segments[0].point_indices.size() == 6);
        check_partition_invariants(part, 6);
    }
    SUBCASE("cycle") {
        const auto g = chain(6, true);
        REQUIRE(g.edges.size() == 6);
        const auto part = partition(g, {});
        REQUIRE(part.segments.size() == 1);
        CHECK(part.segments[0].kind == SegmentKind::closed);
        check_partition_invariants(part, 6);
    }
    SUBCASE("single node") {
        MapperGraph g;
        g.nodes.push_back({{0, 1, 2}, {0}});
        const auto part = partition(g, {});
        REQUIRE(part.segments.size() == 1);
        CHECK(part.segments[0].kind == SegmentKind::isolated);
        CHECK(part.count(SegmentKind::isolated) == 1);
    }
    SUBCASE("star minus its centre") {
        const auto g = star(4);
        const auto c = classify_characteristic_nodes(g, std::vector<PointIndex>{});
        const auto part = partition(g, c);
        CHECK(part.segments.size() == 4);
        CHECK(part.count(SegmentKind::isolated) == 4);
        // shared points stay with the surviving arms; only the exclusive one is removed
        CHECK(part.removed_singular_points == std::vector<PointIndex>{8});
        check_partition_invariants(part, 9);
    }
    SUBCASE("two independent cycles are anomalous") {
        // theta graph: two nodes joined by three disjoint paths
        MapperGraph g;
        g.nodes.push_back({{0, 1, 2}, {0}});
        g.nodes.push_back({{3, 4, 5}, {0}});
        g.nodes.push_back({{0, 3}, {1}});
        g.nodes.push_back({{1, 4}, {1}});
        g.nodes.push_back({{2, 5}, {1}});
        rebuild_edges(g);
        const auto part = partition(g, {});
        REQUIRE(part.segments.size() == 1);
        CHECK(part.segments[0].kind == SegmentKind::anomalous);
    }
}

TEST_CASE("segment_of") {
    const auto g = star(3);
    const auto part = partition(g, classify_characteristic_nodes(g, std::vector<PointIndex>{}));
    const auto seg = part.segment_of(7);
    CHECK(seg[6] == -1);
    for (std::size_t s = 0; s < part.segments.size(); ++s) {
        for (const auto i : part.segments[s].point_indices) {
            CHECK(seg[i] == static_cast<long>(s));
        }
    }
}

TEST_CASE("plus-shaped cloud: one singular node, one segment per arm") {
    const auto cloud = generate_synthetic(plus_spec(1));
    MapperParams p;
    p.delta = synthetic_delta(0.01, 0.02);
    const auto g = two_step_mapper(cloud.points, p);
    const BoundarySpec box{-1.05, 1.05, -1.05, 1.05, p.delta};
    const auto boundary = approximate_boundary_set(cloud.points, box);
    const auto c = classify_characteristic_nodes(g, boundary);
    CHECK(c.singular_nodes.size() == 1);
    CHECK(c.boundary_nodes.size() == 4);
    const auto part = partition(g, c);
    REQUIRE(part.segments.size() == 4);
    // Two nodes per arm at this resolution: dropping the end node and the
    // centre leaves a single node, which classifies as isolated.
    std::set<std::pair<int, int>> arms;
    for (const auto& s : part.segments) {
        CHECK(s.kind == (s.node_ids.size() == 1 ? SegmentKind::isolated : SegmentKind::open));
        std::set<std::pair<int, int>> dirs;
        for (const auto i : s.point_indices) {
            const auto& q = cloud.points[i];
            const bool horizontal = cloud.labels[i] == 0;
            const double along = horizontal ? q[0] : q[1];
            dirs.insert({cloud.labels[i], along > 0 ? 1 : -1});
        }
        CHECK(dirs.size() == 1);
        arms.insert(dirs.begin(), dirs.end());
    }
    CHECK(arms.size() == 4);
    check_partition_invariants(part, cloud.points.size());
}

TEST_CASE("cross-domain matching") {
    PartitionResult one;
    one.segments.push_back({{0, 1}, SegmentKind::open, {0}});
    PartitionResult other;
    other.segments.push_back({{0}, SegmentKind::isolated, {0}});

    SUBCASE("single link") {
        const std::vector<Correspondence> corr{{1, 0}};
        const auto m = match_across_domains(one, 2, other, 1, corr);
        REQUIRE(m.pairs.size() == 1);
        CHECK(m.pairs[0] == SegmentMatch{0, 0, 1});
        CHECK(m.bijective(1, 1));
    }
    SUBCASE("empty correspondence list") {
        const auto m = match_across_domains(one, 2, other, 1, std::vector<Correspondence>{});
        CHECK(m.pairs.empty());
        CHECK_FALSE(m.bijective(1, 1));
    }
    SUBCASE("bad index") {
        const std::vector<Correspondence> corr{{5, 0}};
        CHECK_THROWS_AS(match_across_domains(one, 2, other, 1, corr), RangeError);
    }
    SUBCASE("one closed loop against two seam-cut pieces") {
        PartitionResult loop;
        loop.segments.push_back({{0, 1, 2, 3}, SegmentKind::closed, {0, 1}});
        PartitionResult cut;
        cut.segments.push_back({{0, 1}, SegmentKind::open, {0}});
        cut.segments.push_back({{3, 4}, SegmentKind::open, {2}});
        cut.removed_boundary_points = {2};
        const std::vector<Correspondence> corr{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {3, 4}};
        const auto m = match_across_domains(loop, 4, cut, 5, corr);
        REQUIRE(m.pairs.size() == 2);
        CHECK(m.pairs[0] == SegmentMatch{0, 0, 2});
        CHECK(m.pairs[1] == SegmentMatch{0, 1, 2});
        CHECK_FALSE(m.bijective(1, 2));

        // symmetric when the domains swap
        std::vector<Correspondence> flipped;
        for (const auto& [a, b] : corr) {
            flipped.emplace_back(b, a);
        }
        const auto back = match_across_domains(cut, 5, loop, 4, flipped);
        REQUIRE(back.pairs.size() == 2);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(back.pairs[k].segment1 == m.pairs[k].segment2);
            CHECK(back.pairs[k].segment2 == m.pairs[k].segment1);
            CHECK(back.pairs[k].count == m.pairs[k].count);
        }
    }
}
