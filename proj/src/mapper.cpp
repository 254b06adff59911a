#include "sstopo/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "sstopo/errors.hpp"
#include "sstopo/neighbors.hpp"

namespace sstopo {

namespace {

constexpr double kEigenTie = 1e-9;
constexpr long kMaxIntervals = 10'000'000;

}  // namespace

void MapperParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("delta must be positive");
    }
    if (!(theta_ov > 0.0 && theta_ov < 0.5)) {
        throw ConfigError("overlap ratio must lie in (0, 0.5), got " + std::to_string(theta_ov));
    }
    if (!(alpha > 0.0)) {
        throw ConfigError("alpha must be positive");
    }
}

std::vector<std::vector<NodeId>> MapperGraph::adjacency() const {
    std::vector<std::vector<NodeId>> adj(nodes.size());
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

std::vector<std::size_t> MapperGraph::degrees() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

std::vector<std::size_t> MapperGraph::component_labels() const {
    UnionFind uf(nodes.size());
    for (const auto& [a, b] : edges) {
        uf.unite(a, b);
    }
    std::vector<std::size_t> label(nodes.size(), 0);
    std::size_t next = 0;
    for (const auto& g : uf.groups()) {
        for (const auto n : g) {
            label[n] = next;
        }
        ++next;
    }
    return label;
}

std::size_t MapperGraph::component_count() const {
    const auto labels = component_labels();
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

long MapperGraph::cycle_rank() const {
    return static_cast<long>(edges.size()) - static_cast<long>(nodes.size()) + static_cast<long>(component_count());
}

std::vector<PointIndex> all_indices(std::size_t n) {
    std::vector<PointIndex> idx(n);
    std::iota(idx.begin(), idx.end(), PointIndex{0});
    return idx;
}

Point2 centroid(std::span<const Point2> cloud) {
    if (cloud.empty()) {
        throw EmptyInputError("centroid of an empty cloud");
    }
    Point2 sum = Point2::Zero();
    for (const auto& p : cloud) {
        sum += p;
    }
    return sum / static_cast<double>(cloud.size());
}

Point2 centroid(std::span<const Point2> cloud, std::span<const PointIndex> subset) {
    if (subset.empty()) {
        throw EmptyInputError("centroid of an empty cloud");
    }
    Point2 sum = Point2::Zero();
    for (const auto i : subset) {
        sum += cloud[i];
    }
    return sum / static_cast<double>(subset.size());
}

Point2 principal_direction(std::span<const Point2> cloud) {
    if (cloud.size() < 2) {
        throw DegenerateCloudError("principal direction needs at least two points");
    }
    if (std::all_of(cloud.begin(), cloud.end(), [&](const Point2& p) { return p == cloud.front(); })) {
        throw DegenerateCloudError("all points coincide");
    }
    const Point2 c = centroid(cloud);
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : cloud) {
        const Point2 d = p - c;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(cloud.size());

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
    const auto& vals = solver.eigenvalues();  // ascending
    if (vals[1] - vals[0] < kEigenTie) {
        return Point2::UnitX();
    }
    Point2 w = solver.eigenvectors().col(1).normalized();
    const double lead = std::abs(w[0]) > 1e-12 ? w[0] : w[1];
    if (lead < 0.0) {
        w = -w;
    }
    return w;
}

LinearFilter pca_filter(std::span<const Point2> cloud) {
    LinearFilter f;
    f.center = centroid(cloud);
    try {
        f.direction = principal_direction(cloud);
    } catch (const DegenerateCloudError&) {
        f.direction = Point2::UnitX();
    }
    return f;
}

double eval_filter(const LinearFilter& filter, const Point2& x) { return filter(x); }

double default_delta(double cell_diag) {
    if (!(cell_diag > 0.0)) {
        throw ConfigError("cell diagonal must be positive");
    }
    return 2.0 * cell_diag;
}

double synthetic_delta(double noise_bound, double sample_step) {
    if (noise_bound < 0.0 || !(sample_step > 0.0)) {
        throw ConfigError("noise bound must be >= 0 and sample step > 0");
    }
    return 4.0 * (noise_bound + sample_step / 2.0);
}

double compute_l0(std::span<const Point2> cloud, std::span<const PointIndex> subset, const LinearFilter& filter,
                  double delta, double theta_ov) {
    if (subset.size() < 2) {
        throw DegenerateCloudError("interval length needs at least two points");
    }
    if (!(delta > 0.0) || !(theta_ov > 0.0 && theta_ov < 0.5)) {
        throw ConfigError("compute_l0 needs delta > 0 and theta_ov in (0, 0.5)");
    }
    std::vector<double> f(subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a) {
        f[a] = filter(cloud[subset[a]]);
    }
    bool found = false;
    double sup = 0.0;
    for_each_close_pair(cloud, subset, delta, [&](std::size_t a, std::size_t b) {
        found = true;
        sup = std::max(sup, std::abs(f[a] - f[b]));
    });
    return found ? sup / theta_ov : delta / theta_ov;
}

double compute_l0(std::span<const Point2> cloud, const LinearFilter& filter, double delta, double theta_ov) {
    const auto idx = all_indices(cloud.size());
    return compute_l0(cloud, idx, filter, delta, theta_ov);
}

int interval_count(double range, double l_prime, double theta_ov) {
    if (!(range > 0.0) || !(l_prime > 0.0)) {
        return 1;
    }
    const double s = std::floor((range - theta_ov * l_prime) / ((1.0 - theta_ov) * l_prime));
    if (s > static_cast<double>(kMaxIntervals)) {
        throw ConfigError("cover would need more than " + std::to_string(kMaxIntervals) + " intervals");
    }
    return std::max(1, static_cast<int>(s));
}

int interval_count(std::span<const Point2> cloud, std::span<const PointIndex> subset, const LinearFilter& filter,
                   double l_prime, double theta_ov) {
    if (subset.empty()) {
        return 1;
    }
    double lo = filter(cloud[subset[0]]);
    double hi = lo;
    for (const auto i : subset) {
        const double f = filter(cloud[i]);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    return interval_count(hi - lo, l_prime, theta_ov);
}

Cover build_cover(double f_min, double f_max, int count, double theta_ov) {
    Cover cover;
    cover.overlap_ratio = theta_ov;
    count = std::max(count, 1);
    const double range = f_max - f_min;
    cover.length = range / (count - (count - 1) * theta_ov);
    const double step = (1.0 - theta_ov) * cover.length;
    cover.intervals.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double lo = f_min + k * step;
        cover.intervals.push_back({lo, lo + cover.length});
    }
    // Pin the outer ends so rounding never orphans the extreme values.
    cover.intervals.front().lo = f_min;
    cover.intervals.back().hi = std::max(cover.intervals.back().hi, f_max);
    return cover;
}

std::vector<std::vector<PointIndex>> cluster_preimage(std::span<const PointIndex> subset,
                                                      std::span<const Point2> cloud, double delta) {
    std::vector<PointIndex> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    UnionFind uf(sorted.size());
    for_each_close_pair(cloud, sorted, delta, [&](std::size_t a, std::size_t b) { uf.unite(a, b); });

    std::vector<std::vector<PointIndex>> clusters;
    for (const auto& g : uf.groups()) {
        auto& c = clusters.emplace_back();
        c.reserve(g.size());
        for (const auto pos : g) {
            c.push_back(sorted[pos]);
        }
    }
    return clusters;
}

MapperGraph build_mapper_graph(std::span<const Point2> cloud, std::span<const PointIndex> subset,
                               const LinearFilter& filter, const MapperParams& params) {
    params.validate();
    if (subset.empty()) {
        throw EmptyInputError("mapper graph of an empty cloud");
    }
    std::vector<std::pair<double, PointIndex>> order;
    order.reserve(subset.size());
    for (const auto i : subset) {
        order.emplace_back(filter(cloud[i]), i);
    }
    std::sort(order.begin(), order.end());
    const double f_min = order.front().first;
    const double f_max = order.back().first;

    int count = 1;
    if (subset.size() >= 2) {
        const double l0 = compute_l0(cloud, subset, filter, params.delta, params.theta_ov);
        count = interval_count(f_max - f_min, (1.0 + params.alpha) * l0, params.theta_ov);
    }

    MapperGraph graph;
    graph.cover = build_cover(f_min, f_max, count, params.theta_ov);
    std::vector<PointIndex> members;
    for (std::size_t k = 0; k < graph.cover.intervals.size(); ++k) {
        const Interval iv = graph.cover.intervals[k];
        const auto first = std::lower_bound(order.begin(), order.end(), iv.lo,
                                            [](const auto& e, double x) { return e.first < x; });
        const auto last = std::upper_bound(order.begin(), order.end(), iv.hi,
                                           [](double x, const auto& e) { return x < e.first; });
        members.clear();
        for (auto it = first; it != last; ++it) {
            members.push_back(it->second);
        }
        if (members.empty()) {
            continue;
        }
        for (auto& cluster : cluster_preimage(members, cloud, params.delta)) {
            graph.nodes.push_back({std::move(cluster), {static_cast<int>(k)}});
        }
    }
    rebuild_edges(graph);
    return graph;
}

MapperGraph build_mapper_graph(std::span<const Point2> cloud, const LinearFilter& filter, const MapperParams& params) {
    const auto idx = all_indices(cloud.size());
    return build_mapper_graph(cloud, idx, filter, params);
}

void rebuild_edges(MapperGraph& graph) {
    std::vector<std::pair<PointIndex, NodeId>> incidence;
    for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
        for (const auto p : graph.nodes[n].points) {
            incidence.emplace_back(p, static_cast<NodeId>(n));
        }
    }
    std::sort(incidence.begin(), incidence.end());
    graph.edges.clear();
    for (std::size_t a = 0; a < incidence.size();) {
        std::size_t b = a;
        while (b < incidence.size() && incidence[b].first == incidence[a].first) {
            ++b;
        }
        for (std::size_t i = a; i < b; ++i) {
            for (std::size_t j = i + 1; j < b; ++j) {
                if (incidence[i].second != incidence[j].second) {
                    graph.edges.emplace_back(std::min(incidence[i].second, incidence[j].second),
                                             std::max(incidence[i].second, incidence[j].second));
                }
            }
        }
        a = b;
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
}

}  // namespace sstopo
