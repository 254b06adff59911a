#include "sstopo/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sstopo/errors.hpp"

namespace sstopo {

CurveSpec CurveSpec::segment(Point2 from, Point2 to) {
    CurveSpec c;
    c.type = Type::segment;
    c.from = from;
    c.to = to;
    return c;
}

CurveSpec CurveSpec::arc(Point2 center, double radius, double start_angle, double end_angle) {
    CurveSpec c;
    c.type = Type::arc;
    c.center = center;
    c.radius = radius;
    c.start_angle = start_angle;
    c.end_angle = end_angle;
    return c;
}

CurveSpec CurveSpec::circle(Point2 center, double radius) {
    CurveSpec c;
    c.type = Type::circle;
    c.center = center;
    c.radius = radius;
    c.start_angle = 0.0;
    c.end_angle = 2.0 * std::numbers::pi;
    return c;
}

double CurveSpec::length() const {
    switch (type) {
        case Type::segment:
            return (to - from).norm();
        case Type::arc:
            return radius * std::abs(end_angle - start_angle);
        case Type::circle:
            return 2.0 * std::numbers::pi * radius;
    }
    return 0.0;
}

Point2 CurveSpec::at(double s) const {
    if (type == Type::segment) {
        const double len = length();
        return len > 0.0 ? Point2(from + (to - from) * (s / len)) : from;
    }
    const double dir = end_angle >= start_angle ? 1.0 : -1.0;
    const double a = start_angle + dir * s / radius;
    return center + radius * Point2(std::cos(a), std::sin(a));
}

double CurveSpec::distance(const Point2& p) const {
    if (type == Type::segment) {
        const Point2 d = to - from;
        const double len2 = d.squaredNorm();
        const double t = len2 > 0.0 ? std::clamp((p - from).dot(d) / len2, 0.0, 1.0) : 0.0;
        return (p - (from + t * d)).norm();
    }
    const Point2 rel = p - center;
    if (type == Type::circle) {
        return std::abs(rel.norm() - radius);
    }
    // Arc: radial distance when the angle falls inside the sweep, else nearest end.
    const double lo = std::min(start_angle, end_angle);
    const double hi = std::max(start_angle, end_angle);
    double a = std::atan2(rel[1], rel[0]);
    const double two_pi = 2.0 * std::numbers::pi;
    while (a < lo) {
        a += two_pi;
    }
    if (a <= hi) {
        return std::abs(rel.norm() - radius);
    }
    return std::min((p - at(0.0)).norm(), (p - at(length())).norm());
}

LabeledCloud generate_synthetic(const SynthSpec& spec) {
    if (!(spec.step > 0.0)) {
        throw ConfigError("sample step must be positive");
    }
    if (spec.noise < 0.0) {
        throw ConfigError("noise bound must be nonnegative");
    }
    if (spec.curves.empty()) {
        throw ConfigError("synthetic spec has no curves");
    }
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LabeledCloud out;
    for (std::size_t c = 0; c < spec.curves.size(); ++c) {
        const CurveSpec& curve = spec.curves[c];
        const double len = curve.length();
        const auto steps = static_cast<long>(std::floor(len / spec.step + 1e-9));
        // Closed curves do not repeat their start point.
        const long count = curve.type == CurveSpec::Type::circle ? steps : steps + 1;
        for (long k = 0; k < count; ++k) {
            Point2 p = curve.at(static_cast<double>(k) * spec.step);
            if (spec.noise > 0.0) {
                const double mag = spec.noise * unit(rng);
                const double ang = 2.0 * std::numbers::pi * unit(rng);
                p += mag * Point2(std::cos(ang), std::sin(ang));
            }
            out.points.push_back(p);
            out.labels.push_back(static_cast<int>(c));
        }
    }
    return out;
}

SynthSpec noisy_circle_spec(std::uint64_t seed) {
    SynthSpec s;
    s.seed = seed;
    s.curves = {CurveSpec::circle({0.0, 0.0}, 1.0)};
    return s;
}

SynthSpec three_curve_spec(std::uint64_t seed) {
    // Two shallow arcs spanning x in [0, 6] and a short, nearly vertical
    // segment between them.
    const double radius = 8.5;
    const double a = std::acos(3.0 / radius);
    SynthSpec s;
    s.seed = seed;
    s.curves = {
        CurveSpec::arc({3.0, -8.0}, radius, std::numbers::pi - a, a),
        CurveSpec::segment({3.03, 0.68}, {2.97, 1.62}),
        CurveSpec::arc({3.0, 10.3}, radius, -std::numbers::pi + a, -a),
    };
    return s;
}

SynthSpec plus_spec(std::uint64_t seed) {
    SynthSpec s;
    s.seed = seed;
    s.curves = {CurveSpec::segment({-1.0, 0.0}, {1.0, 0.0}), CurveSpec::segment({0.0, -1.0}, {0.0, 1.0})};
    return s;
}

}  // namespace sstopo
