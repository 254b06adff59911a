#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sstopo/intersection.hpp"
#include "sstopo/mapper.hpp"
#include "sstopo/partition.hpp"
#include "sstopo/two_step_mapper.hpp"

namespace sstopo {

struct PipelineConfig {
    double epsilon = 0.01;
    double theta_ov = 0.2;
    double alpha = 0.001;
    std::optional<double> delta_override;
    std::uint64_t seed = 1;
    int threads = 1;
    double overlap_area_ratio = 0.25;
    /// Parameter box for boundary detection in mapper-only runs.
    std::optional<ParamRect> domain_box;

    std::string out_dir;
    bool emit_graph = false;
    bool emit_svg = false;
    bool dump_boxes = false;

    void validate() const;
};

/// Mapper graph construction times, one row of the runtime table.
struct Timings {
    double initial_seconds = 0.0;
    double subdivision_seconds = 0.0;
    double total_seconds = 0.0;
};

struct DomainResult {
    std::string name;
    std::vector<Point2> points;
    double delta = 0.0;
    std::optional<ParamRect> domain;
    bool periodic_u = false;
    bool periodic_v = false;
    LinearFilter filter;
    std::size_t initial_nodes = 0;
    std::size_t initial_edges = 0;
    std::size_t split_groups = 0;
    MapperGraph graph;
    CharacteristicNodes characteristic;
    PartitionResult partition;
    Timings timings;
};

struct ResultDocument {
    std::string mode;  // "intersect" or "mapper"
    PipelineConfig config;
    bool no_intersection = false;
    bool overlap_suspected = false;
    std::vector<std::string> warnings;
    std::vector<DomainResult> domains;
    std::vector<Correspondence> correspondences;
    CrossDomainMatch match;
    double intersection_seconds = 0.0;
    double pipeline_seconds = 0.0;
};

/// Mapper, characteristic nodes and partition for one parameter domain.
DomainResult analyze_domain(std::string name, std::vector<Point2> points, double delta, const MapperParams& params,
                            const std::optional<BoundarySpec>& boundary);

/// Subdivision intersection, two-step Mapper per domain, partition and
/// cross-domain matching.
ResultDocument run_pipeline(const PipelineConfig& config, const BSplineSurface& s1, const BSplineSurface& s2,
                            IntersectionPointSets* sets_out = nullptr);

/// Two-step Mapper and partition of a raw planar cloud. Needs delta_override.
ResultDocument run_mapper_only(const PipelineConfig& config, const std::vector<Point2>& cloud);

struct SweepRow {
    double theta_ov = 0.0;
    std::size_t initial_nodes = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t segments = 0;
    double seconds = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
};

SweepReport sweep_theta(const PipelineConfig& config, const std::vector<Point2>& cloud,
                        const std::vector<double>& thetas);
SweepReport sweep_theta(const PipelineConfig& config, const BSplineSurface& s1, const BSplineSurface& s2,
                        const std::vector<double>& thetas);

/// Hex digest of the result document without timings and worker count.
std::string result_digest(const ResultDocument& doc);

}  // namespace sstopo
