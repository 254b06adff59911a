#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sstopo/synthetic.hpp"
#include "sstopo/two_step_mapper.hpp"

using namespace sstopo;

namespace {

MapperParams synth_params() {
    MapperParams p;
    p.delta = synthetic_delta(0.01, 0.02);
    return p;
}

std::set<PointIndex> covered(const MapperGraph& g) {
    std::set<PointIndex> out;
    for (const auto& n : g.nodes) {
        out.insert(n.points.begin(), n.points.end());
    }
    return out;
}

}  // namespace

TEST_CASE("orthogonal filter") {
    const LinearFilter x{Point2(1, 2), Point2(1, 0)};
    const auto y = orthogonal_filter(x);
    CHECK((y.center - x.center).norm() == 0.0);
    CHECK((y.direction - Point2(0, 1)).norm() < 1e-15);
    CHECK((orthogonal_filter(y).direction - Point2(-1, 0)).norm() < 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> a(0, 6.283185307179586);
    for (int k = 0; k < 1000; ++k) {
        const double t = a(rng);
        const LinearFilter f{Point2::Zero(), Point2(std::cos(t), std::sin(t))};
        const auto g = orthogonal_filter(f);
        CHECK(std::abs(g.direction.dot(f.direction)) < 1e-12);
        CHECK(std::abs(g.direction.norm() - 1.0) < 1e-12);
        // +90 degrees: the cross product is positive
        CHECK(f.direction[0] * g.direction[1] - f.direction[1] * g.direction[0] > 0.0);
    }
}

TEST_CASE("split interval count") {
    const auto p = synth_params();
    const LinearFilter perp{Point2::Zero(), Point2(0, 1)};
    std::vector<Point2> flat;
    for (int k = 0; k < 50; ++k) {
        flat.emplace_back(0.02 * k, 0.3);
    }
    CHECK(split_interval_count(all_indices(flat.size()), flat, perp, p) == 1);
    CHECK(split_interval_count(std::vector<PointIndex>{7}, flat, perp, p) == 1);

    std::vector<Point2> tall;
    for (int k = 0; k < 100; ++k) {
        tall.emplace_back(0.0, 0.02 * k);
    }
    // Span 1.98 against l' of a few sample steps: several intervals.
    const int s = split_interval_count(all_indices(tall.size()), tall, perp, p);
    CHECK(s >= 2);
    const LinearFilter along_y{Point2::Zero(), Point2(0, 1)};
    const double l0 = oracle::brute_l0(tall, along_y, p.delta, p.theta_ov);
    CHECK(s == interval_count(1.98, (1.0 + p.alpha) * l0, p.theta_ov));
}

TEST_CASE("straight segment is left alone") {
    std::vector<Point2> seg;
    for (int k = 0; k <= 150; ++k) {
        seg.emplace_back(0.02 * k, 0.01 * k);
    }
    const auto res = run_two_step_mapper(seg, synth_params());
    CHECK(res.plan.candidates.empty());
    CHECK(res.plan.groups.empty());
    REQUIRE(res.graph.nodes.size() == res.initial.nodes.size());
    for (std::size_t n = 0; n < res.graph.nodes.size(); ++n) {
        CHECK(res.graph.nodes[n].points == res.initial.nodes[n].points);
    }
    CHECK(res.graph.edges == res.initial.edges);
}

TEST_CASE("three curves: the orthogonal middle curve is split") {
    const auto cloud = generate_synthetic(three_curve_spec(1));
    const auto res = run_two_step_mapper(cloud.points, synth_params());
    CHECK(std::abs(res.filter.direction[0]) > 0.9);

    // Some initial node holds middle-curve points and needs >= 2 orthogonal intervals.
    bool flagged = false;
    for (std::size_t n = 0; n < res.initial.nodes.size(); ++n) {
        const auto& pts = res.initial.nodes[n].points;
        const bool has_middle =
            std::any_of(pts.begin(), pts.end(), [&](PointIndex i) { return cloud.labels[i] == 1; });
        flagged = flagged || (has_middle && res.plan.interval_counts[n] >= 2);
    }
    CHECK(flagged);

    std::size_t middle_nodes = 0;
    for (const auto& n : res.graph.nodes) {
        middle_nodes += std::any_of(n.points.begin(), n.points.end(), [&](PointIndex i) { return cloud.labels[i] == 1; });
    }
    CHECK(middle_nodes >= 2);
    CHECK(res.graph.component_count() == 3);
    CHECK(oracle::edges_exact(res.graph));

    // Each component carries one generating curve.
    const auto labels = res.graph.component_labels();
    std::vector<std::set<int>> curves(3);
    for (std::size_t n = 0; n < res.graph.nodes.size(); ++n) {
        for (const auto i : res.graph.nodes[n].points) {
            curves[labels[n]].insert(cloud.labels[i]);
        }
    }
    for (const auto& c : curves) {
        CHECK(c.size() == 1);
    }
}

TEST_CASE("plus shape has one degree-4 node") {
    const auto cloud = generate_synthetic(plus_spec(1));
    const auto g = two_step_mapper(cloud.points, synth_params());
    const auto deg = g.degrees();
    CHECK(std::count(deg.begin(), deg.end(), 4u) == 1);
    CHECK(std::count_if(deg.begin(), deg.end(), [](std::size_t d) { return d > 2; }) == 1);
    CHECK(g.component_count() == 1);
    CHECK(oracle::edges_exact(g));
}

TEST_CASE("refinement invariants on the synthetic corpus") {
    std::vector<SynthSpec> corpus{noisy_circle_spec(1), noisy_circle_spec(2), three_curve_spec(1),
                                  three_curve_spec(5), plus_spec(3)};
    SynthSpec wave;
    wave.seed = 4;
    wave.curves = {CurveSpec::arc(Point2(0, 0), 1.0, 0.0, 3.0), CurveSpec::arc(Point2(2, 0), 1.0, 3.3, 6.0),
                   CurveSpec::segment(Point2(-1.5, -1.5), Point2(3.5, -1.5))};
    corpus.push_back(wave);

    for (const auto& spec : corpus) {
        const auto cloud = generate_synthetic(spec);
        const auto res = run_two_step_mapper(cloud.points, synth_params());
        // no phantom edges, and every edge is witnessed
        CHECK(oracle::edges_exact(res.graph));
        CHECK(covered(res.graph) == covered(res.initial));
        CHECK(covered(res.graph).size() == cloud.points.size());

        // groups are unions of adjacent candidates; different groups never touch
        std::vector<long> group_of(res.initial.nodes.size(), -1);
        for (std::size_t g = 0; g < res.plan.groups.size(); ++g) {
            for (const auto n : res.plan.groups[g]) {
                CHECK(res.plan.interval_counts[n] >= 2);
                group_of[n] = static_cast<long>(g);
            }
        }
        for (const auto& [a, b] : res.initial.edges) {
            if (group_of[a] >= 0 && group_of[b] >= 0) {
                CHECK(group_of[a] == group_of[b]);
            }
        }
        for (const auto c : res.plan.candidates) {
            CHECK(group_of[c] >= 0);
        }
        // refined graph nodes are canonically ordered
        for (std::size_t n = 1; n < res.graph.nodes.size(); ++n) {
            CHECK(res.graph.nodes[n - 1].points < res.graph.nodes[n].points);
        }
    }
}

TEST_CASE("a second pass finds nothing left to split") {
    for (const auto& spec : {three_curve_spec(1), three_curve_spec(4), noisy_circle_spec(1)}) {
        const auto cloud = generate_synthetic(spec);
        const auto p = synth_params();
        const auto res = run_two_step_mapper(cloud.points, p);
        const auto again = plan_split(res.graph, cloud.points, res.orthogonal, p);
        CHECK(again.candidates.empty());
    }
}

TEST_CASE("a second pass can split again when the filter is tilted") {
    // Noise breaks the isotropic tie of the plus shape, the filter runs
    // diagonally and a refined node keeps an orthogonal span above its own l'.
    const auto cloud = generate_synthetic(plus_spec(2));
    const auto p = synth_params();
    const auto res = run_two_step_mapper(cloud.points, p);
    CHECK(std::abs(res.filter.direction[1]) > 0.5);
    const auto again = plan_split(res.graph, cloud.points, res.orthogonal, p);
    REQUIRE_FALSE(again.candidates.empty());
    for (const auto c : again.candidates) {
        CHECK(res.graph.nodes[c].refined);
    }
}
