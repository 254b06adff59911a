#include "sstopo/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace sstopo {

UnionFind::UnionFind(std::size_t n) : parent_(n), sizes_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) {
        return false;
    }
    if (sizes_[a] < sizes_[b]) {
        std::swap(a, b);
    }
    parent_[b] = a;
    sizes_[a] += sizes_[b];
    return true;
}

std::vector<std::vector<std::size_t>> UnionFind::groups() {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(parent_.size(), SIZE_MAX);
    for (std::size_t i = 0; i < parent_.size(); ++i) {
        const std::size_t r = find(i);
        if (slot[r] == SIZE_MAX) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(i);
    }
    return out;
}

namespace {

constexpr std::size_t kBruteForceBelow = 256;

std::uint64_t cell_key(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffULL);
}

}  // namespace

void for_each_close_pair(std::span<const Point2> cloud, std::span<const std::uint32_t> subset, double radius,
                         const std::function<void(std::size_t, std::size_t)>& visit) {
    const std::size_t n = subset.size();
    const double r2 = radius * radius;
    auto close = [&](std::size_t a, std::size_t b) {
        return (cloud[subset[a]] - cloud[subset[b]]).squaredNorm() < r2;
    };
    if (n < kBruteForceBelow) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (close(a, b)) {
                    visit(a, b);
                }
            }
        }
        return;
    }

    Point2 lo = cloud[subset[0]];
    for (std::size_t a = 1; a < n; ++a) {
        lo = lo.cwiseMin(cloud[subset[a]]);
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> cells(n);
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    grid.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
        const Point2 rel = (cloud[subset[a]] - lo) / radius;
        cells[a] = {static_cast<std::int64_t>(std::floor(rel[0])), static_cast<std::int64_t>(std::floor(rel[1]))};
        grid[cell_key(cells[a].first, cells[a].second)].push_back(a);
    }
    for (std::size_t a = 0; a < n; ++a) {
        const auto [cx, cy] = cells[a];
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = grid.find(cell_key(cx + dx, cy + dy));
                if (it == grid.end()) {
                    continue;
                }
                for (const std::size_t b : it->second) {
                    if (b > a && close(a, b)) {
                        visit(a, b);
                    }
                }
            }
        }
    }
}

}  // namespace sstopo
