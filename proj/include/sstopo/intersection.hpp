#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sstopo/geometry.hpp"

namespace sstopo {

/// Terminal pair of sub-rectangles whose patch boxes intersect.
struct BoxPair {
    ParamRect rect1;
    ParamRect rect2;
};

using Correspondence = std::pair<std::uint32_t, std::uint32_t>;

struct IntersectOptions {
    /// Subdivision stops once both rectangle diagonals are <= epsilon (parameter units).
    double epsilon = 0.02;
    /// Worker threads for the box-pair recursion; the output does not depend on it.
    int threads = 1;
    /// Covered-area fraction of either domain above which the surfaces are
    /// reported as (locally) overlapping.
    double overlap_area_ratio = 0.25;
    /// Hard cap on terminal pairs, protects against tiny epsilon on coincident surfaces.
    std::size_t max_terminal_pairs = 20'000'000;
};

/// Intersection samples in both parameter domains.
///
/// Points are rectangle centroids, deduplicated and sorted lexicographically.
/// Each correspondence (i, j) links points1[i] and points2[j] through a
/// terminal box pair.
struct IntersectionPointSets {
    std::vector<Point2> points1;
    std::vector<Point2> points2;
    std::vector<Correspondence> correspondences;
    double epsilon = 0.0;
    double cell_diag1 = 0.0;
    double cell_diag2 = 0.0;
    ParamRect domain1;
    ParamRect domain2;
    std::vector<BoxPair> boxes;
    bool overlap_suspected = false;

    [[nodiscard]] bool empty() const noexcept { return points1.empty() && points2.empty(); }
};

IntersectionPointSets intersect_surfaces(const BSplineSurface& s1, const BSplineSurface& s2,
                                         const IntersectOptions& options);

inline IntersectionPointSets intersect_surfaces(const BSplineSurface& s1, const BSplineSurface& s2, double epsilon) {
    IntersectOptions options;
    options.epsilon = epsilon;
    return intersect_surfaces(s1, s2, options);
}

/// Half the largest terminal-cell diagonal per domain: a certified bound on
/// the distance from the sampled points to the true intersection preimage.
std::pair<double, double> hausdorff_bound(const IntersectionPointSets& sets);

}  // namespace sstopo
