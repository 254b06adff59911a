#include "sstopo/two_step_mapper.hpp"

#include <algorithm>
#include <chrono>

#include "sstopo/errors.hpp"
#include "sstopo/neighbors.hpp"

namespace sstopo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

template <typename Range>
std::vector<int> merged_intervals(const Range& parts) {
    std::vector<int> out;
    for (const auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

LinearFilter orthogonal_filter(const LinearFilter& filter) {
    LinearFilter out = filter;
    out.direction = Point2(-filter.direction[1], filter.direction[0]).normalized();
    return out;
}

int split_interval_count(std::span<const PointIndex> node_points, std::span<const Point2> cloud,
                         const LinearFilter& orthogonal, const MapperParams& params) {
    if (node_points.size() < 2) {
        return 1;
    }
    const double l0 = compute_l0(cloud, node_points, orthogonal, params.delta, params.theta_ov);
    return interval_count(cloud, node_points, orthogonal, (1.0 + params.alpha) * l0, params.theta_ov);
}

SplitPlan plan_split(const MapperGraph& graph, std::span<const Point2> cloud, const LinearFilter& orthogonal,
                     const MapperParams& params) {
    SplitPlan plan;
    plan.interval_counts.reserve(graph.nodes.size());
    for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
        const int s = split_interval_count(graph.nodes[n].points, cloud, orthogonal, params);
        plan.interval_counts.push_back(s);
        if (s >= 2) {
            plan.candidates.push_back(static_cast<NodeId>(n));
        }
    }
    // Adjacent candidates are split together so their shared points are
    // partitioned once.
    std::vector<bool> is_candidate(graph.nodes.size(), false);
    for (const auto c : plan.candidates) {
        is_candidate[c] = true;
    }
    UnionFind uf(graph.nodes.size());
    for (const auto& [a, b] : graph.edges) {
        if (is_candidate[a] && is_candidate[b]) {
            uf.unite(a, b);
        }
    }
    for (const auto& g : uf.groups()) {
        if (is_candidate[g.front()]) {
            auto& out = plan.groups.emplace_back();
            for (const auto n : g) {
                out.push_back(static_cast<NodeId>(n));
            }
        }
    }
    return plan;
}

TwoStepResult run_two_step_mapper(std::span<const Point2> cloud, const MapperParams& params) {
    params.validate();
    if (cloud.empty()) {
        throw EmptyInputError("two-step mapper of an empty cloud");
    }
    TwoStepResult res;
    const auto t0 = Clock::now();
    res.filter = pca_filter(cloud);
    res.initial = build_mapper_graph(cloud, res.filter, params);
    res.initial_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    res.orthogonal = orthogonal_filter(res.filter);
    res.plan = plan_split(res.initial, cloud, res.orthogonal, params);

    const auto& init = res.initial;
    const auto adj = init.adjacency();
    std::vector<bool> in_group(init.nodes.size(), false);
    for (const auto& g : res.plan.groups) {
        for (const auto n : g) {
            in_group[n] = true;
        }
    }

    std::vector<MapperNode> nodes;
    for (std::size_t n = 0; n < init.nodes.size(); ++n) {
        if (!in_group[n]) {
            nodes.push_back(init.nodes[n]);
        }
    }

    std::vector<char> mark(cloud.size(), 0);
    for (const auto& group : res.plan.groups) {
        std::vector<PointIndex> pts;
        std::vector<std::vector<int>> member_intervals;
        std::vector<NodeId> neighbours;
        for (const auto n : group) {
            pts.insert(pts.end(), init.nodes[n].points.begin(), init.nodes[n].points.end());
            member_intervals.push_back(init.nodes[n].intervals);
            for (const auto m : adj[n]) {
                if (!in_group[m]) {
                    neighbours.push_back(m);
                }
            }
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::sort(neighbours.begin(), neighbours.end());
        neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());

        const MapperGraph sub = build_mapper_graph(cloud, pts, res.orthogonal, params);

        // Sub-nodes touching the same neighbour collapse into one node.
        UnionFind uf(sub.nodes.size());
        for (const auto nb : neighbours) {
            for (const auto p : init.nodes[nb].points) {
                mark[p] = 1;
            }
            std::size_t first = SIZE_MAX;
            for (std::size_t s = 0; s < sub.nodes.size(); ++s) {
                const auto& sp = sub.nodes[s].points;
                if (std::any_of(sp.begin(), sp.end(), [&](PointIndex p) { return mark[p] != 0; })) {
                    if (first == SIZE_MAX) {
                        first = s;
                    } else {
                        uf.unite(first, s);
                    }
                }
            }
            for (const auto p : init.nodes[nb].points) {
                mark[p] = 0;
            }
        }
        const std::vector<int> intervals = merged_intervals(member_intervals);
        for (const auto& g : uf.groups()) {
            MapperNode node;
            for (const auto s : g) {
                node.points.insert(node.points.end(), sub.nodes[s].points.begin(), sub.nodes[s].points.end());
            }
            std::sort(node.points.begin(), node.points.end());
            node.points.erase(std::unique(node.points.begin(), node.points.end()), node.points.end());
            node.intervals = intervals;
            node.refined = true;
            nodes.push_back(std::move(node));
        }
    }

    std::sort(nodes.begin(), nodes.end(), [](const MapperNode& a, const MapperNode& b) { return a.points < b.points; });
    res.graph.nodes = std::move(nodes);
    res.graph.cover = init.cover;
    rebuild_edges(res.graph);
    res.refine_seconds = seconds_since(t1);
    return res;
}

MapperGraph two_step_mapper(std::span<const Point2> cloud, const MapperParams& params) {
    return run_two_step_mapper(cloud, params).graph;
}

}  // namespace sstopo
