#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sstopo/geometry.hpp"

namespace sstopo {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n);

    std::size_t find(std::size_t x);
    /// Returns true if the two sets were distinct.
    bool unite(std::size_t a, std::size_t b);
    [[nodiscard]] std::size_t size() const noexcept { return parent_.size(); }

    /// Groups of element positions, each sorted, groups ordered by first element.
    std::vector<std::vector<std::size_t>> groups();

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> sizes_;
};

/// Calls `visit(a, b)` (positions into `subset`, a < b) for every pair of
/// points with Euclidean distance strictly below `radius`. Uses a uniform
/// grid of cell size `radius`; small inputs fall back to all-pairs.
void for_each_close_pair(std::span<const Point2> cloud, std::span<const std::uint32_t> subset, double radius,
                         const std::function<void(std::size_t, std::size_t)>& visit);

}  // namespace sstopo
