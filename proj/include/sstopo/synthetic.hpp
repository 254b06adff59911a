#pragma once

#include <cstdint>
#include <vector>

#include "sstopo/geometry.hpp"

namespace sstopo {

/// Planar curve to sample. Segments and arcs are open; circles are closed.
struct CurveSpec {
    enum class Type { segment, arc, circle };
    Type type = Type::segment;
    Point2 from = Point2::Zero();
    Point2 to = Point2::UnitX();
    Point2 center = Point2::Zero();
    double radius = 1.0;
    /// Arc angles in radians.
    double start_angle = 0.0;
    double end_angle = 0.0;

    static CurveSpec segment(Point2 from, Point2 to);
    static CurveSpec arc(Point2 center, double radius, double start_angle, double end_angle);
    static CurveSpec circle(Point2 center, double radius);

    [[nodiscard]] double length() const;
    /// Point at arc length s from the curve start.
    [[nodiscard]] Point2 at(double s) const;
    [[nodiscard]] double distance(const Point2& p) const;
};

struct SynthSpec {
    double step = 0.02;
    /// Offsets have uniform magnitude in [0, noise] and uniform direction.
    double noise = 0.01;
    std::uint64_t seed = 1;
    std::vector<CurveSpec> curves;
};

/// Point cloud with a ground-truth curve id per point (-1 when unknown).
struct LabeledCloud {
    std::vector<Point2> points;
    std::vector<int> labels;
};

/// Fixed arc-length sampling of every curve plus seeded offset noise.
LabeledCloud generate_synthetic(const SynthSpec& spec);

/// Unit circle at the origin.
SynthSpec noisy_circle_spec(std::uint64_t seed = 1);

/// Two long horizontal curves with a short curve between them running
/// orthogonal to the principal direction.
SynthSpec three_curve_spec(std::uint64_t seed = 1);

/// Two crossing segments.
SynthSpec plus_spec(std::uint64_t seed = 1);

}  // namespace sstopo
