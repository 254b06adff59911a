#include "sstopo/io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sstopo/errors.hpp"

namespace sstopo {

namespace fs = std::filesystem;

namespace {

template <typename T>
T field(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw FormatError(std::string("missing field '") + key + "'");
    }
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw FormatError(std::string("bad field '") + key + "': " + e.what());
    }
}

template <typename T>
T field_or(const Json& doc, const char* key, T fallback) {
    return doc.contains(key) ? field<T>(doc, key) : fallback;
}

Json point_json(const Point2& p) { return Json::array({p[0], p[1]}); }

Point2 point_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw FormatError("expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json points_json(const std::vector<Point2>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) {
        arr.push_back(point_json(p));
    }
    return arr;
}

std::vector<Point2> points_from(const Json& j) {
    std::vector<Point2> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        out.push_back(point_from(e));
    }
    return out;
}

Json rect_json(const ParamRect& r) { return Json::array({r.u_min, r.u_max, r.v_min, r.v_max}); }

ParamRect rect_from(const Json& j, int surface_id = 1) {
    if (!j.is_array() || j.size() != 4) {
        throw FormatError("expected [u_min, u_max, v_min, v_max]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>(), surface_id};
}

Json curve_json(const CurveSpec& c) {
    switch (c.type) {
        case CurveSpec::Type::segment:
            return {{"type", "segment"}, {"from", point_json(c.from)}, {"to", point_json(c.to)}};
        case CurveSpec::Type::arc:
            return {{"type", "arc"},
                    {"center", point_json(c.center)},
                    {"radius", c.radius},
                    {"start_angle", c.start_angle},
                    {"end_angle", c.end_angle}};
        case CurveSpec::Type::circle:
            return {{"type", "circle"}, {"center", point_json(c.center)}, {"radius", c.radius}};
    }
    return {};
}

CurveSpec curve_from(const Json& j) {
    const auto type = field<std::string>(j, "type");
    if (type == "segment") {
        return CurveSpec::segment(point_from(j.at("from")), point_from(j.at("to")));
    }
    if (type == "arc") {
        return CurveSpec::arc(point_from(j.at("center")), field<double>(j, "radius"), field<double>(j, "start_angle"),
                              field<double>(j, "end_angle"));
    }
    if (type == "circle") {
        return CurveSpec::circle(point_from(j.at("center")), field<double>(j, "radius"));
    }
    throw FormatError("unknown curve type '" + type + "'");
}

Json config_json(const PipelineConfig& c) {
    Json j = {{"epsilon", c.epsilon},
              {"theta_ov", c.theta_ov},
              {"alpha", c.alpha},
              {"delta_override", c.delta_override ? Json(*c.delta_override) : Json(nullptr)},
              {"seed", c.seed},
              {"threads", c.threads},
              {"overlap_area_ratio", c.overlap_area_ratio},
              {"domain_box", c.domain_box ? rect_json(*c.domain_box) : Json(nullptr)}};
    return j;
}

PipelineConfig config_from(const Json& j) {
    PipelineConfig c;
    c.epsilon = field<double>(j, "epsilon");
    c.theta_ov = field<double>(j, "theta_ov");
    c.alpha = field<double>(j, "alpha");
    if (j.contains("delta_override") && !j["delta_override"].is_null()) {
        c.delta_override = j["delta_override"].get<double>();
    }
    c.seed = field_or<std::uint64_t>(j, "seed", 1);
    c.threads = field_or<int>(j, "threads", 1);
    c.overlap_area_ratio = field_or<double>(j, "overlap_area_ratio", 0.25);
    if (j.contains("domain_box") && !j["domain_box"].is_null()) {
        c.domain_box = rect_from(j["domain_box"]);
    }
    return c;
}

Json graph_json(const MapperGraph& g) {
    Json nodes = Json::array();
    for (const auto& n : g.nodes) {
        nodes.push_back({{"points", n.points}, {"intervals", n.intervals}, {"refined", n.refined}});
    }
    Json edges = Json::array();
    for (const auto& [a, b] : g.edges) {
        edges.push_back(Json::array({a, b}));
    }
    Json intervals = Json::array();
    for (const auto& iv : g.cover.intervals) {
        intervals.push_back(Json::array({iv.lo, iv.hi}));
    }
    return {{"nodes", nodes},
            {"edges", edges},
            {"cover", {{"length", g.cover.length}, {"overlap_ratio", g.cover.overlap_ratio}, {"intervals", intervals}}}};
}

MapperGraph graph_from(const Json& j) {
    MapperGraph g;
    for (const auto& n : j.at("nodes")) {
        g.nodes.push_back({field<std::vector<PointIndex>>(n, "points"), field<std::vector<int>>(n, "intervals"),
                           field<bool>(n, "refined")});
    }
    for (const auto& e : j.at("edges")) {
        g.edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    const auto& cover = j.at("cover");
    g.cover.length = field<double>(cover, "length");
    g.cover.overlap_ratio = field<double>(cover, "overlap_ratio");
    for (const auto& iv : cover.at("intervals")) {
        g.cover.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    }
    return g;
}

Json partition_json(const PartitionResult& p) {
    Json segs = Json::array();
    for (const auto& s : p.segments) {
        segs.push_back({{"kind", std::string(to_string(s.kind))}, {"nodes", s.node_ids}, {"points", s.point_indices}});
    }
    return {{"segments", segs},
            {"removed_boundary_points", p.removed_boundary_points},
            {"removed_singular_points", p.removed_singular_points}};
}

PartitionResult partition_from(const Json& j) {
    PartitionResult p;
    for (const auto& s : j.at("segments")) {
        Segment seg;
        seg.kind = segment_kind_from_string(field<std::string>(s, "kind"));
        seg.node_ids = field<std::vector<NodeId>>(s, "nodes");
        seg.point_indices = field<std::vector<PointIndex>>(s, "points");
        p.segments.push_back(std::move(seg));
    }
    p.removed_boundary_points = field<std::vector<PointIndex>>(j, "removed_boundary_points");
    p.removed_singular_points = field<std::vector<PointIndex>>(j, "removed_singular_points");
    return p;
}

Json timings_json(const Timings& t) {
    return {{"initial", t.initial_seconds}, {"subdivision", t.subdivision_seconds}, {"total", t.total_seconds}};
}

Json domain_json(const DomainResult& d, bool include_timings) {
    Json j = {{"name", d.name},
              {"delta", d.delta},
              {"domain", d.domain ? rect_json(*d.domain) : Json(nullptr)},
              {"periodic_u", d.periodic_u},
              {"periodic_v", d.periodic_v},
              {"filter", {{"center", point_json(d.filter.center)}, {"direction", point_json(d.filter.direction)}}},
              {"initial_nodes", d.initial_nodes},
              {"initial_edges", d.initial_edges},
              {"split_groups", d.split_groups},
              {"points", points_json(d.points)},
              {"graph", graph_json(d.graph)},
              {"boundary_nodes", d.characteristic.boundary_nodes},
              {"singular_nodes", d.characteristic.singular_nodes},
              {"partition", partition_json(d.partition)}};
    if (include_timings) {
        j["timings"] = timings_json(d.timings);
    }
    return j;
}

DomainResult domain_from(const Json& j) {
    DomainResult d;
    d.name = field<std::string>(j, "name");
    d.delta = field<double>(j, "delta");
    if (j.contains("domain") && !j["domain"].is_null()) {
        d.domain = rect_from(j["domain"]);
    }
    d.periodic_u = field_or<bool>(j, "periodic_u", false);
    d.periodic_v = field_or<bool>(j, "periodic_v", false);
    d.filter.center = point_from(j.at("filter").at("center"));
    d.filter.direction = point_from(j.at("filter").at("direction"));
    d.initial_nodes = field<std::size_t>(j, "initial_nodes");
    d.initial_edges = field<std::size_t>(j, "initial_edges");
    d.split_groups = field<std::size_t>(j, "split_groups");
    d.points = points_from(j.at("points"));
    d.graph = graph_from(j.at("graph"));
    d.characteristic.boundary_nodes = field<std::vector<NodeId>>(j, "boundary_nodes");
    d.characteristic.singular_nodes = field<std::vector<NodeId>>(j, "singular_nodes");
    d.partition = partition_from(j.at("partition"));
    if (j.contains("timings")) {
        const auto& t = j["timings"];
        d.timings = {field<double>(t, "initial"), field<double>(t, "subdivision"), field<double>(t, "total")};
    }
    return d;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

Json surface_to_json(const BSplineSurface& surface) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < surface.count_u(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < surface.count_v(); ++j) {
            const Point3& p = surface.control_point(i, j);
            row.push_back(Json::array({p[0], p[1], p[2]}));
        }
        rows.push_back(std::move(row));
    }
    return {{"degree_u", surface.degree_u()},
            {"degree_v", surface.degree_v()},
            {"knots_u", surface.knots_u().knots()},
            {"knots_v", surface.knots_v().knots()},
            {"periodic_u", surface.knots_u().periodic()},
            {"periodic_v", surface.knots_v().periodic()},
            {"control_points", rows}};
}

BSplineSurface surface_from_json(const Json& doc) {
    const KnotVector ku(field<std::vector<double>>(doc, "knots_u"), field<int>(doc, "degree_u"),
                        field_or<bool>(doc, "periodic_u", false));
    const KnotVector kv(field<std::vector<double>>(doc, "knots_v"), field<int>(doc, "degree_v"),
                        field_or<bool>(doc, "periodic_v", false));
    const Json& rows = doc.at("control_points");
    if (!rows.is_array() || rows.size() != ku.control_count()) {
        throw FormatError("control_points needs " + std::to_string(ku.control_count()) + " rows");
    }
    std::vector<Point3> pts;
    pts.reserve(ku.control_count() * kv.control_count());
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != kv.control_count()) {
            throw FormatError("control_points rows need " + std::to_string(kv.control_count()) + " entries");
        }
        for (const auto& p : row) {
            if (!p.is_array() || p.size() != 3) {
                throw FormatError("control points are [x, y, z]");
            }
            pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
        }
    }
    return BSplineSurface(ku, kv, std::move(pts));
}

namespace {

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace

BSplineSurface read_surface(const fs::path& path) { return surface_from_json(read_json(path)); }

void write_surface(const fs::path& path, const BSplineSurface& surface) {
    write_text(path, surface_to_json(surface).dump(2) + "\n");
}

LabeledCloud read_cloud(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    LabeledCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        double x = 0.0;
        double y = 0.0;
        if (!(ls >> x)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected 'x y [label]'");
        }
        if (!(ls >> y)) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": missing y");
        }
        int label = -1;
        ls >> label;
        cloud.points.emplace_back(x, y);
        cloud.labels.push_back(label);
    }
    return cloud;
}

void write_cloud(const fs::path& path, const LabeledCloud& cloud) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out << cloud.points[i][0] << ' ' << cloud.points[i][1];
        if (i < cloud.labels.size()) {
            out << ' ' << cloud.labels[i];
        }
        out << '\n';
    }
    write_text(path, out.str());
}

Json synth_spec_to_json(const SynthSpec& spec) {
    Json curves = Json::array();
    for (const auto& c : spec.curves) {
        curves.push_back(curve_json(c));
    }
    return {{"step", spec.step}, {"noise", spec.noise}, {"seed", spec.seed}, {"curves", curves}};
}

SynthSpec synth_spec_from_json(const Json& doc) {
    SynthSpec spec;
    spec.step = field_or<double>(doc, "step", spec.step);
    spec.noise = field_or<double>(doc, "noise", spec.noise);
    spec.seed = field_or<std::uint64_t>(doc, "seed", spec.seed);
    if (!doc.contains("curves") || !doc["curves"].is_array()) {
        throw FormatError("synthetic spec needs a 'curves' array");
    }
    for (const auto& c : doc["curves"]) {
        spec.curves.push_back(curve_from(c));
    }
    return spec;
}

Json result_to_json(const ResultDocument& doc, bool include_timings) {
    Json domains = Json::array();
    for (const auto& d : doc.domains) {
        domains.push_back(domain_json(d, include_timings));
    }
    Json corr = Json::array();
    for (const auto& [a, b] : doc.correspondences) {
        corr.push_back(Json::array({a, b}));
    }
    Json match = Json::array();
    for (const auto& m : doc.match.pairs) {
        match.push_back({{"segment1", m.segment1}, {"segment2", m.segment2}, {"count", m.count}});
    }
    Json j = {{"mode", doc.mode},
              {"config", config_json(doc.config)},
              {"no_intersection", doc.no_intersection},
              {"overlap_suspected", doc.overlap_suspected},
              {"warnings", doc.warnings},
              {"domains", domains},
              {"correspondences", corr},
              {"match", match}};
    if (include_timings) {
        j["timings"] = {{"intersection", doc.intersection_seconds}, {"pipeline", doc.pipeline_seconds}};
    }
    return j;
}

ResultDocument result_from_json(const Json& j) {
    ResultDocument doc;
    doc.mode = field<std::string>(j, "mode");
    doc.config = config_from(j.at("config"));
    doc.no_intersection = field<bool>(j, "no_intersection");
    doc.overlap_suspected = field<bool>(j, "overlap_suspected");
    doc.warnings = field<std::vector<std::string>>(j, "warnings");
    for (const auto& d : j.at("domains")) {
        doc.domains.push_back(domain_from(d));
    }
    for (const auto& c : j.at("correspondences")) {
        doc.correspondences.emplace_back(c.at(0).get<std::uint32_t>(), c.at(1).get<std::uint32_t>());
    }
    for (const auto& m : j.at("match")) {
        doc.match.pairs.push_back(
            {field<std::size_t>(m, "segment1"), field<std::size_t>(m, "segment2"), field<std::size_t>(m, "count")});
    }
    if (j.contains("timings")) {
        doc.intersection_seconds = field<double>(j["timings"], "intersection");
        doc.pipeline_seconds = field<double>(j["timings"], "pipeline");
    }
    return doc;
}

Json boxes_to_json(const IntersectionPointSets& sets) {
    Json pairs = Json::array();
    for (const auto& b : sets.boxes) {
        pairs.push_back({{"rect1", rect_json(b.rect1)}, {"rect2", rect_json(b.rect2)}});
    }
    return {{"epsilon", sets.epsilon},
            {"domain1", rect_json(sets.domain1)},
            {"domain2", rect_json(sets.domain2)},
            {"box_pairs", pairs}};
}

Json sweep_to_json(const SweepReport& report) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"theta_ov", r.theta_ov},
                        {"initial_nodes", r.initial_nodes},
                        {"nodes", r.nodes},
                        {"edges", r.edges},
                        {"segments", r.segments},
                        {"seconds", r.seconds}});
    }
    return {{"rows", rows}};
}

std::string graph_to_dot(const MapperGraph& graph, const std::string& name, const CharacteristicNodes* characteristic) {
    std::vector<char> role(graph.nodes.size(), 0);
    if (characteristic) {
        for (const auto n : characteristic->boundary_nodes) {
            role[n] = 'b';
        }
        for (const auto n : characteristic->singular_nodes) {
            role[n] = 's';  // singular wins the color when a node is both
        }
    }
    std::ostringstream out;
    out << "graph \"" << name << "\" {\n";
    for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
        out << "  n" << n << " [label=\"" << n << " (" << graph.nodes[n].points.size() << ")\"";
        if (role[n] == 'b') {
            out << ", style=filled, fillcolor=yellow";
        } else if (role[n] == 's') {
            out << ", style=filled, fillcolor=blue, fontcolor=white";
        }
        if (graph.nodes[n].refined) {
            out << ", shape=box";
        }
        out << "];\n";
    }
    for (const auto& [a, b] : graph.edges) {
        out << "  n" << a << " -- n" << b << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string domain_svg(const DomainResult& domain) {
    constexpr double kSize = 600.0;
    constexpr double kMargin = 20.0;
    static constexpr std::array<const char*, 10> kPalette = {"#e6194b", "#3cb44b", "#f58231", "#911eb4", "#46f0f0",
                                                             "#f032e6", "#008080", "#9a6324", "#800000", "#808000"};

    double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
    if (domain.domain) {
        u0 = domain.domain->u_min, u1 = domain.domain->u_max;
        v0 = domain.domain->v_min, v1 = domain.domain->v_max;
    } else if (!domain.points.empty()) {
        u0 = u1 = domain.points[0][0];
        v0 = v1 = domain.points[0][1];
        for (const auto& p : domain.points) {
            u0 = std::min(u0, p[0]), u1 = std::max(u1, p[0]);
            v0 = std::min(v0, p[1]), v1 = std::max(v1, p[1]);
        }
    }
    const double span = std::max({u1 - u0, v1 - v0, 1e-12});
    const double scale = (kSize - 2 * kMargin) / span;
    auto sx = [&](double u) { return kMargin + (u - u0) * scale; };
    auto sy = [&](double v) { return kSize - kMargin - (v - v0) * scale; };

    const auto seg = domain.partition.segment_of(domain.points.size());
    std::vector<char> role(domain.points.size(), 0);
    for (const auto i : domain.partition.removed_boundary_points) {
        role[i] = 'b';
    }
    for (const auto i : domain.partition.removed_singular_points) {
        role[i] = 's';
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\">\n";
    out << "<title>" << domain.name << "</title>\n";
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << fmt((u1 - u0) * scale)
        << "\" height=\"" << fmt((v1 - v0) * scale) << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (std::size_t i = 0; i < domain.points.size(); ++i) {
        const char* color = "#000000";
        if (role[i] == 'b') {
            color = "yellow";
        } else if (role[i] == 's') {
            color = "blue";
        } else if (seg[i] >= 0) {
            color = kPalette[static_cast<std::size_t>(seg[i]) % kPalette.size()];
        }
        out << "<circle cx=\"" << fmt(sx(domain.points[i][0])) << "\" cy=\"" << fmt(sy(domain.points[i][1]))
            << "\" r=\"2\" fill=\"" << color << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw FormatError("write failed for " + path.string());
    }
}

std::vector<fs::path> emit_outputs(const ResultDocument& doc, const IntersectionPointSets* sets) {
    std::vector<fs::path> written;
    const fs::path dir = doc.config.out_dir.empty() ? fs::path(".") : fs::path(doc.config.out_dir);
    auto emit = [&](const std::string& file, const std::string& text) {
        write_text(dir / file, text);
        written.push_back(dir / file);
    };
    emit("result.json", result_to_json(doc).dump(2) + "\n");
    for (const auto& d : doc.domains) {
        if (doc.config.emit_graph) {
            emit("graph_" + d.name + ".dot", graph_to_dot(d.graph, d.name, &d.characteristic));
        }
        if (doc.config.emit_svg) {
            emit("domain_" + d.name + ".svg", domain_svg(d));
        }
    }
    if (doc.config.dump_boxes && sets) {
        emit("boxes.json", boxes_to_json(*sets).dump(2) + "\n");
    }
    return written;
}

}  // namespace sstopo
