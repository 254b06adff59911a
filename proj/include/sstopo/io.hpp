#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sstopo/geometry.hpp"
#include "sstopo/pipeline.hpp"
#include "sstopo/synthetic.hpp"

namespace sstopo {

using Json = nlohmann::json;

// Surface documents:
//   { "degree_u": p, "degree_v": q, "knots_u": [...], "knots_v": [...],
//     "periodic_u": bool, "periodic_v": bool,
//     "control_points": [[[x,y,z], ...], ...] }   rows along u, columns along v
Json surface_to_json(const BSplineSurface& surface);
BSplineSurface surface_from_json(const Json& doc);
BSplineSurface read_surface(const std::filesystem::path& path);
void write_surface(const std::filesystem::path& path, const BSplineSurface& surface);

/// Cloud files hold one "x y" or "x y label" line per point; '#' starts a comment.
LabeledCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const LabeledCloud& cloud);

Json synth_spec_to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const Json& doc);

Json result_to_json(const ResultDocument& doc, bool include_timings = true);
ResultDocument result_from_json(const Json& doc);

Json boxes_to_json(const IntersectionPointSets& sets);
Json sweep_to_json(const SweepReport& report);

/// Undirected graph in DOT syntax; characteristic nodes are colored.
std::string graph_to_dot(const MapperGraph& graph, const std::string& name,
                         const CharacteristicNodes* characteristic = nullptr);

/// Scatter plot of a domain's points colored by segment; removed boundary
/// points are yellow and removed singular points blue.
std::string domain_svg(const DomainResult& domain);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes result.json plus the optional graph, plot and box files into
/// config.out_dir. Returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const ResultDocument& doc, const IntersectionPointSets* sets);

}  // namespace sstopo
