#include "sstopo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sstopo/errors.hpp"

namespace sstopo {

namespace {

// Parameters within this (relative) distance outside the range are clamped
// instead of rejected.
constexpr double kRangeSlack = 1e-12;

double clamp_param(double t, double lo, double hi, const char* axis) {
    const double slack = kRangeSlack * std::max(1.0, hi - lo);
    if (!(t >= lo - slack && t <= hi + slack)) {
        throw RangeError(std::string("parameter ") + axis + "=" + std::to_string(t) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return std::clamp(t, lo, hi);
}

using Polygon = std::vector<Point3>;

// One de Boor pass on span k; `pts` points at control point k-p of the polygon.
Point3 de_boor(const std::vector<double>& t, int p, std::size_t k, double x, const Point3* pts, std::size_t stride) {
    std::array<Point3, 16> local{};
    std::vector<Point3> heap;
    Point3* d = local.data();
    if (p + 1 > static_cast<int>(local.size())) {
        heap.resize(p + 1);
        d = heap.data();
    }
    for (int j = 0; j <= p; ++j) {
        d[j] = pts[j * stride];
    }
    for (int r = 1; r <= p; ++r) {
        for (int j = p; j >= r; --j) {
            const std::size_t i = k - p + j;
            const double denom = t[i + p + 1 - r] - t[i];
            const double alpha = denom > 0.0 ? (x - t[i]) / denom : 0.0;
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
        }
    }
    return d[p];
}

// Boehm insertion of `x` into every polygon sharing `knots`.
void insert_knot(std::vector<double>& knots, int p, double x, std::vector<Polygon>& polys) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(knots.begin(), it)) - 1;
    for (auto& poly : polys) {
        Polygon out(poly.size() + 1);
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i + p <= k) {
                out[i] = poly[i];
            } else if (i > k) {
                out[i] = poly[i - 1];
            } else {
                const double alpha = (x - knots[i]) / (knots[i + p] - knots[i]);
                out[i] = alpha * poly[i] + (1.0 - alpha) * poly[i - 1];
            }
        }
        poly = std::move(out);
    }
    knots.insert(knots.begin() + static_cast<std::ptrdiff_t>(k) + 1, x);
}

// Restricts polygons sharing `knots` to [a, b]; returns the clamped knot vector.
std::vector<double> restrict_polygons(std::vector<double> knots, int p, double a, double b,
                                      std::vector<Polygon>& polys) {
    const auto target = static_cast<std::ptrdiff_t>(std::max(p, 1));
    while (std::count(knots.begin(), knots.end(), a) < target) {
        insert_knot(knots, p, a, polys);
    }
    while (std::count(knots.begin(), knots.end(), b) < target) {
        insert_knot(knots, p, b, polys);
    }
    const auto s = static_cast<std::size_t>(std::distance(knots.begin(), std::upper_bound(knots.begin(), knots.end(), a))) - 1;
    const auto e = static_cast<std::size_t>(std::distance(knots.begin(), std::lower_bound(knots.begin(), knots.end(), b)));

    std::vector<double> out(static_cast<std::size_t>(p) + 1, a);
    out.insert(out.end(), knots.begin() + static_cast<std::ptrdiff_t>(s) + 1, knots.begin() + static_cast<std::ptrdiff_t>(e));
    out.insert(out.end(), static_cast<std::size_t>(p) + 1, b);

    const std::size_t first = s - p;
    const std::size_t count = e - s + p;
    for (auto& poly : polys) {
        poly = Polygon(poly.begin() + static_cast<std::ptrdiff_t>(first),
                       poly.begin() + static_cast<std::ptrdiff_t>(first + count));
    }
    return out;
}

void check_rect_in_domain(const BSplineSurface& surface, const ParamRect& rect) {
    if (!rect.valid()) {
        throw RangeError("degenerate parameter rectangle");
    }
    const ParamRect dom = surface.domain();
    const double su = kRangeSlack * std::max(1.0, dom.width());
    const double sv = kRangeSlack * std::max(1.0, dom.height());
    if (rect.u_min < dom.u_min - su || rect.u_max > dom.u_max + su || rect.v_min < dom.v_min - sv ||
        rect.v_max > dom.v_max + sv) {
        throw RangeError("parameter rectangle exceeds the surface domain");
    }
}

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree, bool periodic)
    : knots_(std::move(knots)), degree_(degree), periodic_(periodic) {
    if (degree_ < 0) {
        throw FormatError("negative degree");
    }
    if (knots_.size() < 2 * static_cast<std::size_t>(degree_) + 2) {
        throw FormatError("knot vector too short for degree " + std::to_string(degree_));
    }
    if (!std::is_sorted(knots_.begin(), knots_.end())) {
        throw FormatError("knot vector is not nondecreasing");
    }
    if (!periodic_) {
        const auto p = static_cast<std::size_t>(degree_);
        for (std::size_t i = 1; i <= p; ++i) {
            if (knots_[i] != knots_[0] || knots_[knots_.size() - 1 - i] != knots_.back()) {
                throw FormatError("clamped knot vector needs end multiplicity degree+1");
            }
        }
    }
    if (!(range_begin() < range_end())) {
        throw FormatError("empty parameter range");
    }
}

KnotVector KnotVector::clamped_uniform(int degree, int spans, double begin, double end) {
    std::vector<double> k(static_cast<std::size_t>(degree) + 1, begin);
    for (int i = 1; i < spans; ++i) {
        k.push_back(begin + (end - begin) * i / spans);
    }
    k.insert(k.end(), static_cast<std::size_t>(degree) + 1, end);
    return KnotVector(std::move(k), degree, false);
}

KnotVector KnotVector::periodic_uniform(int degree, int spans, double begin, double end) {
    const double h = (end - begin) / spans;
    std::vector<double> k;
    for (int i = 0; i <= spans + 2 * degree; ++i) {
        k.push_back(begin + (i - degree) * h);
    }
    k[static_cast<std::size_t>(degree)] = begin;
    k[static_cast<std::size_t>(degree + spans)] = end;
    return KnotVector(std::move(k), degree, true);
}

std::size_t KnotVector::find_span(double t) const {
    const double end = range_end();
    const auto p = static_cast<std::size_t>(degree_);
    std::size_t k = 0;
    if (t >= end) {
        k = static_cast<std::size_t>(std::distance(knots_.begin(), std::lower_bound(knots_.begin(), knots_.end(), end))) - 1;
    } else {
        k = static_cast<std::size_t>(std::distance(knots_.begin(), std::upper_bound(knots_.begin(), knots_.end(), t))) - 1;
    }
    return std::clamp(k, p, control_count() - 1);
}

double ParamRect::diagonal() const noexcept { return std::hypot(width(), height()); }

Point2 ParamRect::centroid() const noexcept { return {0.5 * (u_min + u_max), 0.5 * (v_min + v_max)}; }

bool AABB3::intersects(const AABB3& other) const noexcept {
    for (int a = 0; a < 3; ++a) {
        if (max_corner[a] < other.min_corner[a] || other.max_corner[a] < min_corner[a]) {
            return false;
        }
    }
    return true;
}

bool AABB3::contains(const Point3& p, double tol) const noexcept {
    for (int a = 0; a < 3; ++a) {
        if (p[a] < min_corner[a] - tol || p[a] > max_corner[a] + tol) {
            return false;
        }
    }
    return true;
}

BSplineSurface::BSplineSurface(KnotVector knots_u, KnotVector knots_v, std::vector<Point3> control_points)
    : knots_u_(std::move(knots_u)), knots_v_(std::move(knots_v)), points_(std::move(control_points)) {
    if (points_.size() != count_u() * count_v()) {
        throw FormatError("control grid is " + std::to_string(points_.size()) + " points, knots require " +
                         std::to_string(count_u()) + "x" + std::to_string(count_v()));
    }
    // A periodic direction must wrap: its last `degree` control rows repeat the first ones.
    auto check_wrap = [this](bool along_u) {
        const KnotVector& kv = along_u ? knots_u_ : knots_v_;
        if (!kv.periodic()) {
            return;
        }
        const std::size_t n = kv.control_count();
        const std::size_t m = along_u ? count_v() : count_u();
        const auto p = static_cast<std::size_t>(kv.degree());
        double scale = 1.0;
        for (const auto& q : points_) {
            scale = std::max(scale, q.cwiseAbs().maxCoeff());
        }
        for (std::size_t w = 0; w < p; ++w) {
            for (std::size_t o = 0; o < m; ++o) {
                const Point3& head = along_u ? control_point(w, o) : control_point(o, w);
                const Point3& tail = along_u ? control_point(n - p + w, o) : control_point(o, n - p + w);
                if ((head - tail).norm() > 1e-9 * scale) {
                    throw FormatError("periodic control net does not wrap");
                }
            }
        }
    };
    check_wrap(true);
    check_wrap(false);
}

ParamRect BSplineSurface::domain(int surface_id) const {
    return {knots_u_.range_begin(), knots_u_.range_end(), knots_v_.range_begin(), knots_v_.range_end(), surface_id};
}

Point3 evaluate(const BSplineSurface& surface, double u, double v) {
    const ParamRect dom = surface.domain();
    u = clamp_param(u, dom.u_min, dom.u_max, "u");
    v = clamp_param(v, dom.v_min, dom.v_max, "v");
    const int p = surface.degree_u();
    const int q = surface.degree_v();
    const std::size_t ku = surface.knots_u().find_span(u);
    const std::size_t kv = surface.knots_v().find_span(v);
    const std::size_t nv = surface.count_v();

    std::vector<Point3> column(static_cast<std::size_t>(q) + 1);
    for (int l = 0; l <= q; ++l) {
        const std::size_t j = kv - q + l;
        column[l] = de_boor(surface.knots_u().knots(), p, ku, u, surface.control_points().data() + (ku - p) * nv + j, nv);
    }
    return de_boor(surface.knots_v().knots(), q, kv, v, column.data(), 1);
}

BSplineSurface restrict_surface(const BSplineSurface& surface, const ParamRect& rect) {
    check_rect_in_domain(surface, rect);
    const ParamRect dom = surface.domain();
    const double u0 = std::max(rect.u_min, dom.u_min);
    const double u1 = std::min(rect.u_max, dom.u_max);
    const double v0 = std::max(rect.v_min, dom.v_min);
    const double v1 = std::min(rect.v_max, dom.v_max);
    const int p = surface.degree_u();
    const int q = surface.degree_v();

    // Restrict along u: one polygon per v index.
    std::vector<Polygon> cols(surface.count_v(), Polygon(surface.count_u()));
    for (std::size_t i = 0; i < surface.count_u(); ++i) {
        for (std::size_t j = 0; j < surface.count_v(); ++j) {
            cols[j][i] = surface.control_point(i, j);
        }
    }
    auto ku = restrict_polygons(surface.knots_u().knots(), p, u0, u1, cols);
    const std::size_t nu = cols.front().size();

    std::vector<Polygon> rows(nu, Polygon(surface.count_v()));
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < surface.count_v(); ++j) {
            rows[i][j] = cols[j][i];
        }
    }
    auto kv = restrict_polygons(surface.knots_v().knots(), q, v0, v1, rows);

    std::vector<Point3> grid;
    grid.reserve(nu * rows.front().size());
    for (const auto& row : rows) {
        grid.insert(grid.end(), row.begin(), row.end());
    }
    return BSplineSurface(KnotVector(std::move(ku), p), KnotVector(std::move(kv), q), std::move(grid));
}

ControlGrid subpatch_control_net(const BSplineSurface& surface, const ParamRect& rect) {
    BSplineSurface sub = restrict_surface(surface, rect);
    return {sub.count_u(), sub.count_v(), sub.control_points()};
}

AABB3 control_net_aabb(const BSplineSurface& surface) {
    const auto& pts = surface.control_points();
    AABB3 box{pts.front(), pts.front()};
    for (const auto& p : pts) {
        box.min_corner = box.min_corner.cwiseMin(p);
        box.max_corner = box.max_corner.cwiseMax(p);
    }
    // Pad by a few ulps of the coordinate magnitude so rounding in the
    // control net never breaks the enclosure; exact zeros stay exact.
    for (int a = 0; a < 3; ++a) {
        const double mag = std::max(std::abs(box.min_corner[a]), std::abs(box.max_corner[a]));
        const double pad = 1e-13 * mag;
        box.min_corner[a] -= pad;
        box.max_corner[a] += pad;
    }
    return box;
}

AABB3 patch_aabb(const BSplineSurface& surface, const ParamRect& rect) {
    return control_net_aabb(restrict_surface(surface, rect));
}

std::pair<ParamRect, ParamRect> split_rect(const ParamRect& rect) {
    ParamRect a = rect;
    ParamRect b = rect;
    if (rect.width() >= rect.height()) {
        const double mid = 0.5 * (rect.u_min + rect.u_max);
        a.u_max = mid;
        b.u_min = mid;
    } else {
        const double mid = 0.5 * (rect.v_min + rect.v_max);
        a.v_max = mid;
        b.v_min = mid;
    }
    return {a, b};
}

}  // namespace sstopo
