#pragma once

#include <span>
#include <vector>

#include "sstopo/mapper.hpp"

namespace sstopo {

/// Which initial nodes get refined along the orthogonal direction.
struct SplitPlan {
    /// S_i for every node of the initial graph.
    std::vector<int> interval_counts;
    /// Nodes with S_i >= 2, ascending.
    std::vector<NodeId> candidates;
    /// Candidates merged by adjacency; each group becomes one node to split.
    std::vector<std::vector<NodeId>> groups;
};

struct TwoStepResult {
    LinearFilter filter;
    LinearFilter orthogonal;
    MapperGraph initial;
    SplitPlan plan;
    MapperGraph graph;
    double initial_seconds = 0.0;
    double refine_seconds = 0.0;
};

/// Same center, direction rotated by +90 degrees.
LinearFilter orthogonal_filter(const LinearFilter& filter);

/// Number of orthogonal intervals a node's points would need. Nodes with
/// fewer than two points never split.
int split_interval_count(std::span<const PointIndex> node_points, std::span<const Point2> cloud,
                         const LinearFilter& orthogonal, const MapperParams& params);

SplitPlan plan_split(const MapperGraph& graph, std::span<const Point2> cloud, const LinearFilter& orthogonal,
                     const MapperParams& params);

/// Initial graph under the principal-direction filter, then one refinement
/// pass that splits wide nodes with the orthogonal filter while keeping the
/// shared points of each neighbour inside a single sub-node.
TwoStepResult run_two_step_mapper(std::span<const Point2> cloud, const MapperParams& params);

MapperGraph two_step_mapper(std::span<const Point2> cloud, const MapperParams& params);

}  // namespace sstopo
