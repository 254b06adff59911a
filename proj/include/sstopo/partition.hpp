#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sstopo/intersection.hpp"
#include "sstopo/mapper.hpp"

namespace sstopo {

/// Parameter-domain box and dilation radius used to detect boundary points.
struct BoundarySpec {
    double u_s = 0.0;
    double u_e = 1.0;
    double v_s = 0.0;
    double v_e = 1.0;
    double delta = 0.0;
    bool periodic_u = false;
    bool periodic_v = false;

    static BoundarySpec from_rect(const ParamRect& rect, double delta, bool periodic_u = false, bool periodic_v = false);
};

struct CharacteristicNodes {
    std::vector<NodeId> boundary_nodes;
    std::vector<NodeId> singular_nodes;
};

enum class SegmentKind { open, closed, isolated, anomalous };

std::string_view to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(std::string_view name);

struct Segment {
    std::vector<PointIndex> point_indices;
    SegmentKind kind = SegmentKind::open;
    std::vector<NodeId> node_ids;
};

struct PartitionResult {
    std::vector<Segment> segments;
    std::vector<PointIndex> removed_boundary_points;
    std::vector<PointIndex> removed_singular_points;

    /// Segment id per point, -1 for removed points. Sized `cloud_size`.
    [[nodiscard]] std::vector<long> segment_of(std::size_t cloud_size) const;
    [[nodiscard]] std::size_t count(SegmentKind kind) const;
};

struct SegmentMatch {
    std::size_t segment1 = 0;
    std::size_t segment2 = 0;
    std::size_t count = 0;

    friend bool operator==(const SegmentMatch&, const SegmentMatch&) = default;
};

struct CrossDomainMatch {
    std::vector<SegmentMatch> pairs;

    /// Every segment on both sides appears in exactly one pair.
    [[nodiscard]] bool bijective(std::size_t segments1, std::size_t segments2) const;
};

/// Points within delta of the domain boundary lines. Throws ConfigError when
/// the bands would cover the whole domain.
std::vector<PointIndex> approximate_boundary_set(std::span<const Point2> points, const BoundarySpec& spec);

/// Boundary nodes meet the boundary set; singular nodes have degree > 2.
CharacteristicNodes classify_characteristic_nodes(const MapperGraph& graph,
                                                  std::span<const PointIndex> boundary_indices);

/// Removes characteristic nodes and classifies the remaining components as
/// paths (open), cycles (closed) or single nodes (isolated).
PartitionResult partition(const MapperGraph& graph, const CharacteristicNodes& characteristic);

/// Segment pairs linked by at least one correspondence; removed points do not vote.
CrossDomainMatch match_across_domains(const PartitionResult& part1, std::size_t cloud1_size,
                                      const PartitionResult& part2, std::size_t cloud2_size,
                                      std::span<const Correspondence> correspondences);

}  // namespace sstopo
