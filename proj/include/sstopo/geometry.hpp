#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sstopo {

using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;

/// Knot vector of a B-spline basis.
///
/// Clamped vectors carry end knots of multiplicity degree+1. Periodic vectors
/// are unclamped; the surface is then intersected over its principal range
/// [knots[degree], knots[size-degree-1]].
class KnotVector {
public:
    KnotVector() = default;
    KnotVector(std::vector<double> knots, int degree, bool periodic = false);

    /// Clamped, uniformly spaced knots on [begin, end] with `spans` interior spans.
    static KnotVector clamped_uniform(int degree, int spans, double begin = 0.0, double end = 1.0);
    /// Unclamped uniform knots whose principal range is [begin, end] split into `spans` spans.
    static KnotVector periodic_uniform(int degree, int spans, double begin = 0.0, double end = 1.0);

    [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] bool periodic() const noexcept { return periodic_; }
    [[nodiscard]] std::size_t control_count() const noexcept { return knots_.size() - degree_ - 1; }
    [[nodiscard]] double range_begin() const noexcept { return knots_[degree_]; }
    [[nodiscard]] double range_end() const noexcept { return knots_[control_count()]; }

    /// Index k with knots[k] <= t < knots[k+1], restricted to the valid spans.
    [[nodiscard]] std::size_t find_span(double t) const;

private:
    std::vector<double> knots_;
    int degree_ = 0;
    bool periodic_ = false;
};

/// Axis-parallel rectangle in one surface's parameter domain.
struct ParamRect {
    double u_min = 0.0;
    double u_max = 1.0;
    double v_min = 0.0;
    double v_max = 1.0;
    int surface_id = 1;

    [[nodiscard]] double width() const noexcept { return u_max - u_min; }
    [[nodiscard]] double height() const noexcept { return v_max - v_min; }
    [[nodiscard]] double diagonal() const noexcept;
    [[nodiscard]] double area() const noexcept { return width() * height(); }
    [[nodiscard]] Point2 centroid() const noexcept;
    [[nodiscard]] bool valid() const noexcept { return u_min < u_max && v_min < v_max; }

    friend bool operator==(const ParamRect&, const ParamRect&) = default;
};

struct AABB3 {
    Point3 min_corner = Point3::Zero();
    Point3 max_corner = Point3::Zero();

    /// Closed-box test: boxes that only touch still intersect.
    [[nodiscard]] bool intersects(const AABB3& other) const noexcept;
    [[nodiscard]] bool contains(const Point3& p, double tol = 0.0) const noexcept;
    [[nodiscard]] double diagonal() const noexcept { return (max_corner - min_corner).norm(); }
};

/// Non-rational tensor-product B-spline surface. Control point (i, j) sits at
/// index i along u and j along v.
class BSplineSurface {
public:
    BSplineSurface() = default;
    BSplineSurface(KnotVector knots_u, KnotVector knots_v, std::vector<Point3> control_points);

    [[nodiscard]] const KnotVector& knots_u() const noexcept { return knots_u_; }
    [[nodiscard]] const KnotVector& knots_v() const noexcept { return knots_v_; }
    [[nodiscard]] int degree_u() const noexcept { return knots_u_.degree(); }
    [[nodiscard]] int degree_v() const noexcept { return knots_v_.degree(); }
    [[nodiscard]] std::size_t count_u() const noexcept { return knots_u_.control_count(); }
    [[nodiscard]] std::size_t count_v() const noexcept { return knots_v_.control_count(); }
    [[nodiscard]] const std::vector<Point3>& control_points() const noexcept { return points_; }
    [[nodiscard]] const Point3& control_point(std::size_t i, std::size_t j) const { return points_[i * count_v() + j]; }

    /// Full principal parameter range as a rectangle tagged with `surface_id`.
    [[nodiscard]] ParamRect domain(int surface_id = 1) const;

private:
    KnotVector knots_u_;
    KnotVector knots_v_;
    std::vector<Point3> points_;
};

/// Row-major grid of control points (rows along u).
struct ControlGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Point3> points;

    [[nodiscard]] const Point3& at(std::size_t i, std::size_t j) const { return points[i * cols + j]; }
};

/// Surface point by de Boor recursion. Throws RangeError outside the parameter range.
Point3 evaluate(const BSplineSurface& surface, double u, double v);

/// Clamped surface identical to `surface` on `rect`, built by knot insertion.
BSplineSurface restrict_surface(const BSplineSurface& surface, const ParamRect& rect);

/// Control net of the restriction of `surface` to `rect`.
ControlGrid subpatch_control_net(const BSplineSurface& surface, const ParamRect& rect);

/// Bounding box of a surface's control net. Encloses the whole surface.
AABB3 control_net_aabb(const BSplineSurface& surface);

/// Guaranteed enclosure of the surface patch over `rect`.
AABB3 patch_aabb(const BSplineSurface& surface, const ParamRect& rect);

/// Bisects `rect` across its longer side; equal sides split along u.
std::pair<ParamRect, ParamRect> split_rect(const ParamRect& rect);

}  // namespace sstopo
