// Command-line driver: surface intersection topology, raw-cloud Mapper,
// synthetic clouds and overlap-ratio sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sstopo/errors.hpp"
#include "sstopo/fixtures.hpp"
#include "sstopo/io.hpp"
#include "sstopo/pipeline.hpp"
#include "sstopo/synthetic.hpp"

namespace fs = std::filesystem;
using namespace sstopo;

namespace {

struct Options {
    PipelineConfig config;
    double delta = 0.0;
    std::vector<double> domain;
    std::vector<double> thetas{0.1, 0.2, 0.3, 0.4};
    std::string surface1;
    std::string surface2;
    std::string cloud;
    std::string spec;
    std::string fixture_name;
    std::string sweep_cloud;
    std::string sweep_fixture;
    std::string cloud_out;
    bool write_fixture = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--theta-ov", o.config.theta_ov, "Cover overlap ratio in (0, 0.5)")->capture_default_str();
    cmd->add_option("--alpha", o.config.alpha, "Interval length margin")->capture_default_str();
    cmd->add_option("--delta", o.delta, "Clustering radius (overrides the derived value)");
    cmd->add_option("--out-dir", o.config.out_dir, "Directory for result files");
    cmd->add_flag("--emit-graph", o.config.emit_graph, "Write Mapper graphs in DOT format");
    cmd->add_flag("--emit-svg", o.config.emit_svg, "Write one SVG scatter plot per domain");
    cmd->add_flag("--quiet", o.quiet, "Only print errors");
}

void add_surface_opts(CLI::App* cmd, Options& o) {
    cmd->add_option("--epsilon", o.config.epsilon, "Subdivision precision in parameter units")->capture_default_str();
    cmd->add_option("--threads", o.config.threads, "Subdivision worker threads")->capture_default_str();
    cmd->add_flag("--dump-boxes", o.config.dump_boxes, "Write terminal box pairs to boxes.json");
}

void add_cloud_opts(CLI::App* cmd, Options& o) {
    cmd->add_option("--domain", o.domain, "Parameter box u_min u_max v_min v_max for boundary detection")
        ->expected(4);
}

void finish_config(Options& o, const CLI::App& cmd) {
    if (cmd.count("--delta") > 0) {
        o.config.delta_override = o.delta;
    }
    if (o.domain.size() == 4) {
        o.config.domain_box = ParamRect{o.domain[0], o.domain[1], o.domain[2], o.domain[3], 1};
    }
}

void print_summary(const ResultDocument& doc) {
    if (doc.no_intersection) {
        std::cout << "no intersection\n";
    }
    for (const auto& d : doc.domains) {
        std::cout << d.name << ": " << d.points.size() << " points, delta " << d.delta << ", "
                  << d.graph.nodes.size() << " nodes, " << d.graph.edges.size() << " edges, "
                  << d.characteristic.boundary_nodes.size() << " boundary, " << d.characteristic.singular_nodes.size()
                  << " singular, segments: " << d.partition.count(SegmentKind::open) << " open, "
                  << d.partition.count(SegmentKind::closed) << " closed, " << d.partition.count(SegmentKind::isolated)
                  << " isolated, " << d.partition.count(SegmentKind::anomalous) << " anomalous\n";
    }
    if (doc.mode == "intersect" && !doc.no_intersection) {
        std::cout << "matched segment pairs: " << doc.match.pairs.size() << '\n';
    }
    std::printf("%-8s %10s %12s %10s\n", "domain", "Initial", "Subdivision", "Total");
    for (const auto& d : doc.domains) {
        std::printf("%-8s %10.4f %12.4f %10.4f\n", d.name.c_str(), d.timings.initial_seconds,
                    d.timings.subdivision_seconds, d.timings.total_seconds);
    }
    for (const auto& w : doc.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

void finish(const ResultDocument& doc, const IntersectionPointSets* sets, const Options& o) {
    const auto written = emit_outputs(doc, sets);
    if (!o.quiet) {
        print_summary(doc);
        for (const auto& p : written) {
            std::cout << "wrote " << p.string() << '\n';
        }
    }
}

void print_sweep(const SweepReport& report) {
    std::printf("%-8s %8s %8s %8s %9s %10s\n", "theta", "initial", "nodes", "edges", "segments", "seconds");
    for (const auto& r : report.rows) {
        std::printf("%-8.3f %8zu %8zu %8zu %9zu %10.4f\n", r.theta_ov, r.initial_nodes, r.nodes, r.edges, r.segments,
                    r.seconds);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topology of surface-surface intersection curves via two-step Mapper"};
    app.require_subcommand(1);
    Options o;

    auto* intersect = app.add_subcommand("intersect", "Intersect two B-spline surface files");
    intersect->add_option("surface1", o.surface1, "First surface (JSON)")->required()->check(CLI::ExistingFile);
    intersect->add_option("surface2", o.surface2, "Second surface (JSON)")->required()->check(CLI::ExistingFile);
    add_common(intersect, o);
    add_surface_opts(intersect, o);

    auto* mapper = app.add_subcommand("mapper", "Two-step Mapper and partition of a planar point cloud");
    mapper->add_option("cloud", o.cloud, "Cloud file, 'x y [label]' per line")->required()->check(CLI::ExistingFile);
    add_common(mapper, o);
    add_cloud_opts(mapper, o);

    auto* synth = app.add_subcommand("synth", "Sample a noisy cloud from a curve spec and run the Mapper on it");
    synth->add_option("spec", o.spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
    synth->add_option("--seed", o.config.seed, "Noise seed (overrides the seed in the curve file)");
    synth->add_option("--cloud-out", o.cloud_out, "Also write the sampled cloud with labels");
    add_common(synth, o);
    add_cloud_opts(synth, o);

    auto* sweep = app.add_subcommand("sweep", "Run the pipeline for several overlap ratios");
    sweep->add_option("--theta-list", o.thetas, "Overlap ratios")->delimiter(',')->capture_default_str();
    auto* sweep_src = sweep->add_option_group("input");
    sweep_src->add_option("--cloud", o.sweep_cloud, "Cloud file")->check(CLI::ExistingFile);
    sweep_src->add_option("--fixture", o.sweep_fixture, "Built-in surface pair");
    sweep_src->require_option(1);
    add_common(sweep, o);
    add_surface_opts(sweep, o);
    add_cloud_opts(sweep, o);

    auto* fix = app.add_subcommand("fixture", "Run or export a built-in surface pair");
    fix->add_option("name", o.fixture_name, "Fixture name (use 'list' to show all)")->required();
    fix->add_flag("--write", o.write_fixture, "Write the two surfaces as JSON into --out-dir and stop");
    add_common(fix, o);
    add_surface_opts(fix, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*intersect) {
            finish_config(o, *intersect);
            const auto s1 = read_surface(o.surface1);
            const auto s2 = read_surface(o.surface2);
            IntersectionPointSets sets;
            const auto doc = run_pipeline(o.config, s1, s2, &sets);
            finish(doc, &sets, o);
        } else if (*mapper) {
            finish_config(o, *mapper);
            const auto cloud = read_cloud(o.cloud);
            finish(run_mapper_only(o.config, cloud.points), nullptr, o);
        } else if (*synth) {
            finish_config(o, *synth);
            std::ifstream in(o.spec);
            auto spec = synth_spec_from_json(Json::parse(in));
            if (synth->count("--seed") > 0) {
                spec.seed = o.config.seed;
            }
            o.config.seed = spec.seed;
            if (!o.config.delta_override) {
                o.config.delta_override = synthetic_delta(spec.noise, spec.step);
            }
            const auto cloud = generate_synthetic(spec);
            if (!o.cloud_out.empty()) {
                write_cloud(o.cloud_out, cloud);
            }
            finish(run_mapper_only(o.config, cloud.points), nullptr, o);
        } else if (*sweep) {
            finish_config(o, *sweep);
            SweepReport report;
            if (!o.sweep_cloud.empty()) {
                report = sweep_theta(o.config, read_cloud(o.sweep_cloud).points, o.thetas);
            } else {
                const auto pair = fixture(o.sweep_fixture);
                report = sweep_theta(o.config, pair.first, pair.second, o.thetas);
            }
            if (!o.quiet) {
                print_sweep(report);
            }
            if (!o.config.out_dir.empty()) {
                write_text(fs::path(o.config.out_dir) / "sweep.json", sweep_to_json(report).dump(2) + "\n");
            }
        } else if (*fix) {
            finish_config(o, *fix);
            if (o.fixture_name == "list") {
                for (const auto& name : fixture_names()) {
                    std::cout << name << ": " << fixture(name).description << '\n';
                }
                return 0;
            }
            const auto pair = fixture(o.fixture_name);
            if (o.write_fixture) {
                const fs::path dir = o.config.out_dir.empty() ? fs::path(".") : fs::path(o.config.out_dir);
                write_surface(dir / (pair.name + "_1.json"), pair.first);
                write_surface(dir / (pair.name + "_2.json"), pair.second);
                return 0;
            }
            IntersectionPointSets sets;
            const auto doc = run_pipeline(o.config, pair.first, pair.second, &sets);
            finish(doc, &sets, o);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
