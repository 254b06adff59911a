#include "sstopo/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <future>

#include "sstopo/errors.hpp"
#include "sstopo/io.hpp"

namespace sstopo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

MapperParams mapper_params(const PipelineConfig& config, double delta) {
    MapperParams p;
    p.delta = delta;
    p.theta_ov = config.theta_ov;
    p.alpha = config.alpha;
    return p;
}

void add_domain_warnings(ResultDocument& doc) {
    for (const auto& d : doc.domains) {
        if (!d.characteristic.singular_nodes.empty()) {
            doc.warnings.push_back(d.name + ": singular nodes found; the clustering radius may exceed the local reach "
                                            "of the intersection near them");
        }
        if (d.partition.count(SegmentKind::anomalous) > 0) {
            doc.warnings.push_back(d.name + ": some components are neither paths nor cycles");
        }
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon must be positive");
    }
    MapperParams p;
    p.delta = delta_override.value_or(1.0);
    p.theta_ov = theta_ov;
    p.alpha = alpha;
    p.validate();
}

DomainResult analyze_domain(std::string name, std::vector<Point2> points, double delta, const MapperParams& params,
                            const std::optional<BoundarySpec>& boundary) {
    DomainResult d;
    d.name = std::move(name);
    d.points = std::move(points);
    d.delta = delta;
    if (boundary) {
        d.domain = ParamRect{boundary->u_s, boundary->u_e, boundary->v_s, boundary->v_e, 0};
        d.periodic_u = boundary->periodic_u;
        d.periodic_v = boundary->periodic_v;
    }
    if (d.points.empty()) {
        return d;
    }
    MapperParams p = params;
    p.delta = delta;
    TwoStepResult ts = run_two_step_mapper(d.points, p);
    d.filter = ts.filter;
    d.initial_nodes = ts.initial.nodes.size();
    d.initial_edges = ts.initial.edges.size();
    d.split_groups = ts.plan.groups.size();
    d.graph = std::move(ts.graph);
    d.timings = {ts.initial_seconds, ts.refine_seconds, ts.initial_seconds + ts.refine_seconds};

    std::vector<PointIndex> boundary_set;
    if (boundary) {
        boundary_set = approximate_boundary_set(d.points, *boundary);
    }
    d.characteristic = classify_characteristic_nodes(d.graph, boundary_set);
    d.partition = partition(d.graph, d.characteristic);
    return d;
}

ResultDocument run_pipeline(const PipelineConfig& config, const BSplineSurface& s1, const BSplineSurface& s2,
                            IntersectionPointSets* sets_out) {
    config.validate();
    const auto t0 = Clock::now();
    ResultDocument doc;
    doc.mode = "intersect";
    doc.config = config;

    IntersectOptions opts;
    opts.epsilon = config.epsilon;
    opts.threads = config.threads;
    opts.overlap_area_ratio = config.overlap_area_ratio;
    IntersectionPointSets sets = intersect_surfaces(s1, s2, opts);
    doc.intersection_seconds = seconds_since(t0);
    doc.overlap_suspected = sets.overlap_suspected;
    doc.correspondences = sets.correspondences;

    const bool pu1 = s1.knots_u().periodic();
    const bool pv1 = s1.knots_v().periodic();
    const bool pu2 = s2.knots_u().periodic();
    const bool pv2 = s2.knots_v().periodic();

    if (sets.empty()) {
        doc.no_intersection = true;
        doc.warnings.emplace_back("the surfaces do not intersect");
        for (const auto& [name, rect, pu, pv] : {std::tuple{"uv", sets.domain1, pu1, pv1},
                                                  std::tuple{"st", sets.domain2, pu2, pv2}}) {
            DomainResult d;
            d.name = name;
            d.domain = rect;
            d.periodic_u = pu;
            d.periodic_v = pv;
            doc.domains.push_back(std::move(d));
        }
        doc.pipeline_seconds = seconds_since(t0);
        if (sets_out) {
            *sets_out = std::move(sets);
        }
        return doc;
    }

    const auto [h1, h2] = hausdorff_bound(sets);
    const double delta1 = config.delta_override.value_or(default_delta(2.0 * h1));
    const double delta2 = config.delta_override.value_or(default_delta(2.0 * h2));
    const MapperParams params = mapper_params(config, delta1);

    if (sets.overlap_suspected) {
        doc.warnings.emplace_back("surface overlap suspected: the intersection covers an area, topology not claimed");
        DomainResult d1;
        d1.name = "uv";
        d1.points = sets.points1;
        d1.delta = delta1;
        d1.domain = sets.domain1;
        DomainResult d2;
        d2.name = "st";
        d2.points = sets.points2;
        d2.delta = delta2;
        d2.domain = sets.domain2;
        doc.domains.push_back(std::move(d1));
        doc.domains.push_back(std::move(d2));
    } else {
        const auto b1 = BoundarySpec::from_rect(sets.domain1, delta1, pu1, pv1);
        const auto b2 = BoundarySpec::from_rect(sets.domain2, delta2, pu2, pv2);
        auto second = std::async(std::launch::async, [&] {
            return analyze_domain("st", sets.points2, delta2, params, b2);
        });
        DomainResult first = analyze_domain("uv", sets.points1, delta1, params, b1);
        doc.domains.push_back(std::move(first));
        doc.domains.push_back(second.get());

        doc.match = match_across_domains(doc.domains[0].partition, doc.domains[0].points.size(),
                                         doc.domains[1].partition, doc.domains[1].points.size(),
                                         sets.correspondences);
        if (doc.match.pairs.empty()) {
            doc.warnings.emplace_back("no correspondence links surviving segments across the domains");
        }
        add_domain_warnings(doc);
    }
    doc.pipeline_seconds = seconds_since(t0);
    if (sets_out) {
        *sets_out = std::move(sets);
    }
    return doc;
}

ResultDocument run_mapper_only(const PipelineConfig& config, const std::vector<Point2>& cloud) {
    if (!config.delta_override) {
        throw ConfigError("mapper mode needs an explicit clustering radius (--delta)");
    }
    config.validate();
    if (cloud.empty()) {
        throw EmptyInputError("empty point cloud");
    }
    const auto t0 = Clock::now();
    ResultDocument doc;
    doc.mode = "mapper";
    doc.config = config;
    const double delta = *config.delta_override;
    std::optional<BoundarySpec> boundary;
    if (config.domain_box) {
        boundary = BoundarySpec::from_rect(*config.domain_box, delta);
    }
    doc.domains.push_back(analyze_domain("xy", cloud, delta, mapper_params(config, delta), boundary));
    add_domain_warnings(doc);
    doc.pipeline_seconds = seconds_since(t0);
    return doc;
}

namespace {

void check_thetas(const std::vector<double>& thetas) {
    if (thetas.empty()) {
        throw ConfigError("empty overlap ratio list");
    }
    for (const double t : thetas) {
        if (!(t > 0.0 && t < 0.5)) {
            throw ConfigError("overlap ratio must lie in (0, 0.5), got " + std::to_string(t));
        }
    }
}

SweepRow sweep_row(double theta, const DomainResult& d, double seconds) {
    return {theta, d.initial_nodes, d.graph.nodes.size(), d.graph.edges.size(), d.partition.segments.size(), seconds};
}

}  // namespace

SweepReport sweep_theta(const PipelineConfig& config, const std::vector<Point2>& cloud,
                        const std::vector<double>& thetas) {
    check_thetas(thetas);
    SweepReport report;
    for (const double t : thetas) {
        PipelineConfig c = config;
        c.theta_ov = t;
        const auto t0 = Clock::now();
        const ResultDocument doc = run_mapper_only(c, cloud);
        report.rows.push_back(sweep_row(t, doc.domains.front(), seconds_since(t0)));
    }
    return report;
}

SweepReport sweep_theta(const PipelineConfig& config, const BSplineSurface& s1, const BSplineSurface& s2,
                        const std::vector<double>& thetas) {
    check_thetas(thetas);
    SweepReport report;
    for (const double t : thetas) {
        PipelineConfig c = config;
        c.theta_ov = t;
        const auto t0 = Clock::now();
        const ResultDocument doc = run_pipeline(c, s1, s2);
        report.rows.push_back(sweep_row(t, doc.domains.front(), seconds_since(t0)));
    }
    return report;
}

std::string result_digest(const ResultDocument& doc) {
    Json j = result_to_json(doc, false);
    // Worker count is a scheduling knob; the result must not depend on it.
    j["config"].erase("threads");
    const std::string text = j.dump();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sstopo
