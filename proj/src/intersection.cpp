#include "sstopo/intersection.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

#include "sstopo/errors.hpp"

namespace sstopo {

namespace {

// A node of one surface's subdivision tree. Children are built lazily and
// shared by every pair that reaches this node.
class PatchNode {
public:
    PatchNode(const ParamRect& rect, BSplineSurface patch)
        : rect_(rect), patch_(std::move(patch)), box_(control_net_aabb(patch_)), diag_(rect.diagonal()) {}

    [[nodiscard]] const ParamRect& rect() const noexcept { return rect_; }
    [[nodiscard]] const AABB3& box() const noexcept { return box_; }
    [[nodiscard]] double diagonal() const noexcept { return diag_; }

    const PatchNode& child(int which) const {
        std::call_once(once_, [this] {
            const auto [a, b] = split_rect(rect_);
            kids_[0] = std::make_unique<PatchNode>(a, restrict_surface(patch_, a));
            kids_[1] = std::make_unique<PatchNode>(b, restrict_surface(patch_, b));
        });
        return *kids_[which];
    }

private:
    ParamRect rect_;
    BSplineSurface patch_;
    AABB3 box_;
    double diag_;
    mutable std::once_flag once_;
    mutable std::array<std::unique_ptr<PatchNode>, 2> kids_;
};

struct NodePair {
    const PatchNode* a;
    const PatchNode* b;
};

// Expands one pair: either terminal, or pushes the intersecting children.
template <typename Push, typename Emit>
void expand(const NodePair& pr, double eps, Push&& push, Emit&& emit) {
    const PatchNode& a = *pr.a;
    const PatchNode& b = *pr.b;
    if (a.diagonal() <= eps && b.diagonal() <= eps) {
        emit(pr);
        return;
    }
    if (a.diagonal() >= b.diagonal()) {
        for (int k = 0; k < 2; ++k) {
            const PatchNode& c = a.child(k);
            if (c.box().intersects(b.box())) {
                push(NodePair{&c, &b});
            }
        }
    } else {
        for (int k = 0; k < 2; ++k) {
            const PatchNode& c = b.child(k);
            if (a.box().intersects(c.box())) {
                push(NodePair{&a, &c});
            }
        }
    }
}

auto rect_key(const ParamRect& r) { return std::make_tuple(r.u_min, r.v_min, r.u_max, r.v_max); }

bool rect_less(const ParamRect& x, const ParamRect& y) { return rect_key(x) < rect_key(y); }

struct DomainPoints {
    std::vector<Point2> points;
    std::vector<std::uint32_t> rect_to_point;  // indexed like the sorted unique rects
    std::vector<ParamRect> rects;
    double max_diag = 0.0;
    double covered_area = 0.0;
};

// Unique terminal rects -> deduplicated, lexicographically ordered centroids.
DomainPoints collect_domain(std::vector<ParamRect> rects) {
    DomainPoints out;
    std::sort(rects.begin(), rects.end(), rect_less);
    rects.erase(std::unique(rects.begin(), rects.end()), rects.end());

    std::vector<std::pair<Point2, std::size_t>> cents;
    cents.reserve(rects.size());
    for (std::size_t i = 0; i < rects.size(); ++i) {
        cents.emplace_back(rects[i].centroid(), i);
        out.max_diag = std::max(out.max_diag, rects[i].diagonal());
        out.covered_area += rects[i].area();
    }
    std::sort(cents.begin(), cents.end(), [](const auto& x, const auto& y) {
        return std::tie(x.first[0], x.first[1], x.second) < std::tie(y.first[0], y.first[1], y.second);
    });
    out.rect_to_point.assign(rects.size(), 0);
    constexpr double kMergeTol = 1e-12;
    for (const auto& [c, idx] : cents) {
        if (out.points.empty() || (out.points.back() - c).norm() >= kMergeTol) {
            out.points.push_back(c);
        }
        out.rect_to_point[idx] = static_cast<std::uint32_t>(out.points.size() - 1);
    }
    out.rects = std::move(rects);
    return out;
}

std::uint32_t lookup(const DomainPoints& d, const ParamRect& r) {
    const auto it = std::lower_bound(d.rects.begin(), d.rects.end(), r, rect_less);
    return d.rect_to_point[static_cast<std::size_t>(std::distance(d.rects.begin(), it))];
}

}  // namespace

IntersectionPointSets intersect_surfaces(const BSplineSurface& s1, const BSplineSurface& s2,
                                         const IntersectOptions& options) {
    if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) {
        throw ConfigError("epsilon must be positive");
    }
    const double eps = options.epsilon;
    IntersectionPointSets result;
    result.epsilon = eps;
    result.domain1 = s1.domain(1);
    result.domain2 = s2.domain(2);

    ParamRect r1 = result.domain1;
    ParamRect r2 = result.domain2;
    const PatchNode root1(r1, restrict_surface(s1, r1));
    const PatchNode root2(r2, restrict_surface(s2, r2));

    std::vector<NodePair> terminal;
    if (root1.box().intersects(root2.box())) {
        std::mutex mu;
        std::atomic<std::size_t> total{0};
        auto check_cap = [&](std::size_t n) {
            if (total.fetch_add(n) + n > options.max_terminal_pairs) {
                throw ConfigError("terminal box pairs exceed the configured cap; increase epsilon");
            }
        };

        // Breadth-first until there is enough work to hand out.
        std::vector<NodePair> frontier{NodePair{&root1, &root2}};
        const int workers = std::max(1, options.threads);
        const std::size_t wanted = workers > 1 ? static_cast<std::size_t>(16 * workers) : 0;
        while (!frontier.empty() && frontier.size() < wanted) {
            std::vector<NodePair> next;
            bool progressed = false;
            for (const auto& pr : frontier) {
                expand(
                    pr, eps, [&](const NodePair& c) { next.push_back(c), progressed = true; },
                    [&](const NodePair& t) { terminal.push_back(t); });
            }
            frontier = std::move(next);
            if (!progressed) {
                break;
            }
        }

        auto run_range = [&](std::atomic<std::size_t>& cursor) {
            std::vector<NodePair> local;
            std::vector<NodePair> stack;
            for (std::size_t i = cursor.fetch_add(1); i < frontier.size(); i = cursor.fetch_add(1)) {
                stack.push_back(frontier[i]);
                while (!stack.empty()) {
                    const NodePair pr = stack.back();
                    stack.pop_back();
                    expand(
                        pr, eps, [&](const NodePair& c) { stack.push_back(c); },
                        [&](const NodePair& t) { local.push_back(t); });
                    if (local.size() >= 4096) {
                        check_cap(local.size());
                        std::lock_guard lock(mu);
                        terminal.insert(terminal.end(), local.begin(), local.end());
                        local.clear();
                    }
                }
            }
            check_cap(local.size());
            std::lock_guard lock(mu);
            terminal.insert(terminal.end(), local.begin(), local.end());
        };

        std::atomic<std::size_t> cursor{0};
        if (workers == 1) {
            run_range(cursor);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        run_range(cursor);
                    } catch (...) {
                        errors[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) {
                t.join();
            }
            for (const auto& e : errors) {
                if (e) {
                    std::rethrow_exception(e);
                }
            }
        }
    }

    if (terminal.empty()) {
        return result;
    }

    std::vector<ParamRect> rects1;
    std::vector<ParamRect> rects2;
    rects1.reserve(terminal.size());
    rects2.reserve(terminal.size());
    for (const auto& t : terminal) {
        rects1.push_back(t.a->rect());
        rects2.push_back(t.b->rect());
    }
    DomainPoints d1 = collect_domain(rects1);
    DomainPoints d2 = collect_domain(rects2);

    result.boxes.reserve(terminal.size());
    result.correspondences.reserve(terminal.size());
    for (const auto& t : terminal) {
        result.boxes.push_back({t.a->rect(), t.b->rect()});
        result.correspondences.emplace_back(lookup(d1, t.a->rect()), lookup(d2, t.b->rect()));
    }
    std::sort(result.boxes.begin(), result.boxes.end(), [](const BoxPair& x, const BoxPair& y) {
        return std::make_pair(rect_key(x.rect1), rect_key(x.rect2)) < std::make_pair(rect_key(y.rect1), rect_key(y.rect2));
    });
    std::sort(result.correspondences.begin(), result.correspondences.end());
    result.correspondences.erase(std::unique(result.correspondences.begin(), result.correspondences.end()),
                                 result.correspondences.end());

    result.points1 = std::move(d1.points);
    result.points2 = std::move(d2.points);
    result.cell_diag1 = d1.max_diag;
    result.cell_diag2 = d2.max_diag;
    result.overlap_suspected = d1.covered_area > options.overlap_area_ratio * result.domain1.area() ||
                               d2.covered_area > options.overlap_area_ratio * result.domain2.area();
    return result;
}

std::pair<double, double> hausdorff_bound(const IntersectionPointSets& sets) {
    if (sets.points1.empty() || sets.points2.empty()) {
        throw EmptyInputError("hausdorff bound of an empty intersection");
    }
    return {0.5 * sets.cell_diag1, 0.5 * sets.cell_diag2};
}

}  // namespace sstopo
