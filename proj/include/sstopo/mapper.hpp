#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sstopo/geometry.hpp"

namespace sstopo {

using PointIndex = std::uint32_t;
using NodeId = std::uint32_t;

/// Linear projection filter f(x) = <x - center, direction>.
struct LinearFilter {
    Point2 center = Point2::Zero();
    Point2 direction = Point2::UnitX();

    [[nodiscard]] double operator()(const Point2& x) const noexcept { return (x - center).dot(direction); }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double f) const noexcept { return lo <= f && f <= hi; }
};

/// S equal-length intervals; consecutive intervals overlap by overlap_ratio * length.
struct Cover {
    std::vector<Interval> intervals;
    double length = 0.0;
    double overlap_ratio = 0.0;
};

struct MapperParams {
    /// Clustering radius: points closer than delta are linked.
    double delta = 0.0;
    double theta_ov = 0.2;
    /// Interval length margin, l' = (1 + alpha) * l0.
    double alpha = 0.001;

    /// Throws ConfigError unless delta > 0, 0 < theta_ov < 0.5 and alpha > 0.
    void validate() const;
};

struct MapperNode {
    /// Sorted indices into the input cloud.
    std::vector<PointIndex> points;
    /// Cover intervals this node's cluster came from.
    std::vector<int> intervals;
    /// Produced by the orthogonal refinement pass.
    bool refined = false;
};

/// Undirected graph whose nodes are clusters; an edge joins two nodes iff
/// their point sets intersect.
struct MapperGraph {
    std::vector<MapperNode> nodes;
    /// Sorted (a, b) pairs with a < b.
    std::vector<std::pair<NodeId, NodeId>> edges;
    Cover cover;

    [[nodiscard]] std::vector<std::vector<NodeId>> adjacency() const;
    [[nodiscard]] std::vector<std::size_t> degrees() const;
    /// Component label per node; labels are 0..count-1 in order of first node.
    [[nodiscard]] std::vector<std::size_t> component_labels() const;
    [[nodiscard]] std::size_t component_count() const;
    /// |E| - |V| + components: the number of independent cycles.
    [[nodiscard]] long cycle_rank() const;
};

Point2 centroid(std::span<const Point2> cloud);
Point2 centroid(std::span<const Point2> cloud, std::span<const PointIndex> subset);

/// Leading eigenvector of the 2x2 covariance of the centered cloud, unit
/// length, first nonzero component positive. Near-isotropic clouds
/// (eigenvalue gap < 1e-9) get (1, 0).
Point2 principal_direction(std::span<const Point2> cloud);

/// Centroid and principal direction of the cloud. Clouds without spread fall
/// back to the direction (1, 0).
LinearFilter pca_filter(std::span<const Point2> cloud);

double eval_filter(const LinearFilter& filter, const Point2& x);

/// Clustering radius from the largest terminal-cell diagonal: 2 * cell_diag.
double default_delta(double cell_diag);

/// Clustering radius for synthetic samples with the given noise bound and
/// arc-length step: 4 * (noise + step / 2).
double synthetic_delta(double noise_bound, double sample_step);

/// Lower bound on the interval length: the largest filter difference over
/// point pairs closer than delta, divided by theta_ov. Falls back to
/// delta / theta_ov when no pair is that close.
double compute_l0(std::span<const Point2> cloud, std::span<const PointIndex> subset, const LinearFilter& filter,
                  double delta, double theta_ov);
double compute_l0(std::span<const Point2> cloud, const LinearFilter& filter, double delta, double theta_ov);

/// Number of cover intervals for a filter range and interval length l'; at least 1.
int interval_count(double range, double l_prime, double theta_ov);
int interval_count(std::span<const Point2> cloud, std::span<const PointIndex> subset, const LinearFilter& filter,
                   double l_prime, double theta_ov);

Cover build_cover(double f_min, double f_max, int count, double theta_ov);

/// Connected components of the delta-neighbourhood graph on `subset`
/// (strict distance < delta). Clusters are sorted and ordered by smallest index.
std::vector<std::vector<PointIndex>> cluster_preimage(std::span<const PointIndex> subset,
                                                      std::span<const Point2> cloud, double delta);

MapperGraph build_mapper_graph(std::span<const Point2> cloud, std::span<const PointIndex> subset,
                               const LinearFilter& filter, const MapperParams& params);
MapperGraph build_mapper_graph(std::span<const Point2> cloud, const LinearFilter& filter, const MapperParams& params);

/// Recomputes all edges from point-set intersections.
void rebuild_edges(MapperGraph& graph);

std::vector<PointIndex> all_indices(std::size_t n);

}  // namespace sstopo
