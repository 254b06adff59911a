#include "sstopo/partition.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "sstopo/errors.hpp"

namespace sstopo {

BoundarySpec BoundarySpec::from_rect(const ParamRect& rect, double delta, bool periodic_u, bool periodic_v) {
    return {rect.u_min, rect.u_max, rect.v_min, rect.v_max, delta, periodic_u, periodic_v};
}

std::string_view to_string(SegmentKind kind) {
    switch (kind) {
        case SegmentKind::open:
            return "open";
        case SegmentKind::closed:
            return "closed";
        case SegmentKind::isolated:
            return "isolated";
        case SegmentKind::anomalous:
            return "anomalous";
    }
    return "anomalous";
}

SegmentKind segment_kind_from_string(std::string_view name) {
    for (const auto k : {SegmentKind::open, SegmentKind::closed, SegmentKind::isolated, SegmentKind::anomalous}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw FormatError("unknown segment kind '" + std::string(name) + "'");
}

std::vector<long> PartitionResult::segment_of(std::size_t cloud_size) const {
    std::vector<long> out(cloud_size, -1);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (const auto p : segments[s].point_indices) {
            out[p] = static_cast<long>(s);
        }
    }
    return out;
}

std::size_t PartitionResult::count(SegmentKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(segments.begin(), segments.end(), [kind](const Segment& s) { return s.kind == kind; }));
}

bool CrossDomainMatch::bijective(std::size_t segments1, std::size_t segments2) const {
    if (segments1 != segments2 || pairs.size() != segments1) {
        return false;
    }
    std::vector<int> seen1(segments1, 0);
    std::vector<int> seen2(segments2, 0);
    for (const auto& p : pairs) {
        if (p.segment1 >= segments1 || p.segment2 >= segments2 || seen1[p.segment1]++ || seen2[p.segment2]++) {
            return false;
        }
    }
    return true;
}

std::vector<PointIndex> approximate_boundary_set(std::span<const Point2> points, const BoundarySpec& spec) {
    if (!(spec.delta > 0.0)) {
        throw ConfigError("boundary dilation delta must be positive");
    }
    if (!(spec.u_s < spec.u_e && spec.v_s < spec.v_e)) {
        throw ConfigError("degenerate boundary domain");
    }
    if (2.0 * spec.delta >= spec.u_e - spec.u_s || 2.0 * spec.delta >= spec.v_e - spec.v_s) {
        throw ConfigError("delta is at least half the domain width; every point would be a boundary point");
    }
    // Periodic axes are unfolded at the seam, so both seam bands count as boundary too.
    std::vector<PointIndex> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double u = points[i][0];
        const double v = points[i][1];
        if (u < spec.u_s + spec.delta || u > spec.u_e - spec.delta || v < spec.v_s + spec.delta ||
            v > spec.v_e - spec.delta) {
            out.push_back(static_cast<PointIndex>(i));
        }
    }
    return out;
}

CharacteristicNodes classify_characteristic_nodes(const MapperGraph& graph,
                                                  std::span<const PointIndex> boundary_indices) {
    CharacteristicNodes out;
    std::vector<PointIndex> boundary(boundary_indices.begin(), boundary_indices.end());
    std::sort(boundary.begin(), boundary.end());
    const auto deg = graph.degrees();
    for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
        const auto& pts = graph.nodes[n].points;
        const bool touches = std::any_of(pts.begin(), pts.end(), [&](PointIndex p) {
            return std::binary_search(boundary.begin(), boundary.end(), p);
        });
        if (touches) {
            out.boundary_nodes.push_back(static_cast<NodeId>(n));
        }
        if (deg[n] > 2) {
            out.singular_nodes.push_back(static_cast<NodeId>(n));
        }
    }
    return out;
}

PartitionResult partition(const MapperGraph& graph, const CharacteristicNodes& characteristic) {
    const std::size_t n = graph.nodes.size();
    std::vector<bool> removed(n, false);
    std::vector<bool> boundary(n, false);
    std::vector<bool> singular(n, false);
    for (const auto b : characteristic.boundary_nodes) {
        removed[b] = boundary[b] = true;
    }
    for (const auto s : characteristic.singular_nodes) {
        removed[s] = singular[s] = true;
    }

    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& [a, b] : graph.edges) {
        if (!removed[a] && !removed[b]) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }

    PartitionResult out;
    std::vector<bool> seen(n, false);
    for (std::size_t start = 0; start < n; ++start) {
        if (removed[start] || seen[start]) {
            continue;
        }
        Segment seg;
        std::vector<NodeId> stack{static_cast<NodeId>(start)};
        seen[start] = true;
        std::size_t degree_sum = 0;
        std::size_t max_degree = 0;
        std::size_t min_degree = SIZE_MAX;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            seg.node_ids.push_back(v);
            degree_sum += adj[v].size();
            max_degree = std::max(max_degree, adj[v].size());
            min_degree = std::min(min_degree, adj[v].size());
            for (const auto w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(seg.node_ids.begin(), seg.node_ids.end());
        const std::size_t nodes = seg.node_ids.size();
        const std::size_t edges = degree_sum / 2;
        if (nodes == 1) {
            seg.kind = SegmentKind::isolated;
        } else if (max_degree <= 2 && edges + 1 == nodes) {
            seg.kind = SegmentKind::open;
        } else if (max_degree == 2 && min_degree == 2 && edges == nodes) {
            seg.kind = SegmentKind::closed;
        } else {
            seg.kind = SegmentKind::anomalous;
        }
        for (const auto v : seg.node_ids) {
            seg.point_indices.insert(seg.point_indices.end(), graph.nodes[v].points.begin(), graph.nodes[v].points.end());
        }
        std::sort(seg.point_indices.begin(), seg.point_indices.end());
        seg.point_indices.erase(std::unique(seg.point_indices.begin(), seg.point_indices.end()), seg.point_indices.end());
        out.segments.push_back(std::move(seg));
    }

    // Points held only by removed nodes.
    std::vector<PointIndex> kept;
    for (const auto& s : out.segments) {
        kept.insert(kept.end(), s.point_indices.begin(), s.point_indices.end());
    }
    std::sort(kept.begin(), kept.end());
    for (std::size_t v = 0; v < n; ++v) {
        if (!removed[v]) {
            continue;
        }
        for (const auto p : graph.nodes[v].points) {
            if (std::binary_search(kept.begin(), kept.end(), p)) {
                continue;
            }
            if (boundary[v]) {
                out.removed_boundary_points.push_back(p);
            }
            if (singular[v]) {
                out.removed_singular_points.push_back(p);
            }
        }
    }
    for (auto* list : {&out.removed_boundary_points, &out.removed_singular_points}) {
        std::sort(list->begin(), list->end());
        list->erase(std::unique(list->begin(), list->end()), list->end());
    }
    return out;
}

CrossDomainMatch match_across_domains(const PartitionResult& part1, std::size_t cloud1_size,
                                      const PartitionResult& part2, std::size_t cloud2_size,
                                      std::span<const Correspondence> correspondences) {
    const auto seg1 = part1.segment_of(cloud1_size);
    const auto seg2 = part2.segment_of(cloud2_size);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
    for (const auto& [i, j] : correspondences) {
        if (i >= cloud1_size || j >= cloud2_size) {
            throw RangeError("correspondence index out of range");
        }
        if (seg1[i] < 0 || seg2[j] < 0) {
            continue;
        }
        ++counts[{static_cast<std::size_t>(seg1[i]), static_cast<std::size_t>(seg2[j])}];
    }
    CrossDomainMatch out;
    for (const auto& [key, c] : counts) {
        out.pairs.push_back({key.first, key.second, c});
    }
    return out;
}

}  // namespace sstopo
