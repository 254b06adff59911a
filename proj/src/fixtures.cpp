#include "sstopo/fixtures.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "sstopo/errors.hpp"

namespace sstopo {

namespace {

Eigen::MatrixXd bernstein_at_nodes(int degree) {
    Eigen::MatrixXd m(degree + 1, degree + 1);
    for (int k = 0; k <= degree; ++k) {
        const double t = degree == 0 ? 0.5 : static_cast<double>(k) / degree;
        for (int i = 0; i <= degree; ++i) {
            double binom = 1.0;
            for (int j = 1; j <= i; ++j) {
                binom = binom * (degree - i + j) / j;
            }
            m(k, i) = binom * std::pow(t, i) * std::pow(1.0 - t, degree - i);
        }
    }
    return m;
}

BSplineSurface plane_z0() {
    return bezier_from_function(1, 1, [](double u, double v) { return Point3(2 * u - 1, 2 * v - 1, 0.0); });
}

// Clamped quadratic with C1 double knots tracing the upper half circle of
// radius r from angle 0 to pi.
struct Profile {
    KnotVector knots;
    std::vector<Point2> points;
};

Profile semicircle_profile(double r, int pieces) {
    const double step = std::numbers::pi / pieces;
    std::vector<double> k{0.0, 0.0, 0.0};
    std::vector<Point2> pts;
    for (int i = 0; i < pieces; ++i) {
        const double a = i * step;
        pts.emplace_back(r * std::cos(a), r * std::sin(a));
        const double mid = a + 0.5 * step;
        const double rr = r / std::cos(0.5 * step);
        pts.emplace_back(rr * std::cos(mid), rr * std::sin(mid));
        if (i > 0) {
            k.push_back(static_cast<double>(i) / pieces);
            k.push_back(static_cast<double>(i) / pieces);
        }
    }
    pts.emplace_back(-r, 0.0);
    k.insert(k.end(), {1.0, 1.0, 1.0});
    return {KnotVector(std::move(k), 2), std::move(pts)};
}

}  // namespace

BSplineSurface bezier_from_function(int deg_u, int deg_v, const std::function<Point3(double, double)>& f) {
    const Eigen::MatrixXd mu_inv = bernstein_at_nodes(deg_u).inverse();
    const Eigen::MatrixXd mv_inv = bernstein_at_nodes(deg_v).inverse();
    std::array<Eigen::MatrixXd, 3> values;
    for (auto& m : values) {
        m.resize(deg_u + 1, deg_v + 1);
    }
    for (int i = 0; i <= deg_u; ++i) {
        const double u = deg_u == 0 ? 0.5 : static_cast<double>(i) / deg_u;
        for (int j = 0; j <= deg_v; ++j) {
            const double v = deg_v == 0 ? 0.5 : static_cast<double>(j) / deg_v;
            const Point3 p = f(u, v);
            for (int a = 0; a < 3; ++a) {
                values[a](i, j) = p[a];
            }
        }
    }
    std::vector<Point3> grid(static_cast<std::size_t>((deg_u + 1) * (deg_v + 1)));
    for (int a = 0; a < 3; ++a) {
        const Eigen::MatrixXd c = mu_inv * values[a] * mv_inv.transpose();
        for (int i = 0; i <= deg_u; ++i) {
            for (int j = 0; j <= deg_v; ++j) {
                grid[static_cast<std::size_t>(i * (deg_v + 1) + j)][a] = c(i, j);
            }
        }
    }
    return BSplineSurface(KnotVector::clamped_uniform(deg_u, 1), KnotVector::clamped_uniform(deg_v, 1), std::move(grid));
}

SurfacePair crossed_planes_pair() {
    return {"crossed-planes", "plane z=0 against the saddle z=xy; the intersection is two crossing lines",
            plane_z0(),
            bezier_from_function(1, 1, [](double u, double v) {
                const double x = 2 * u - 1;
                const double y = 2 * v - 1;
                return Point3(x, y, x * y);
            })};
}

SurfacePair double_cross_pair() {
    return {"double-cross", "plane z=0 against z=2y(x^2-1/4); a line crossed by two lines, two singular points",
            plane_z0(),
            bezier_from_function(2, 1, [](double u, double v) {
                const double x = 2 * u - 1;
                const double y = 2 * v - 1;
                return Point3(x, y, 2.0 * y * (x * x - 0.25));
            })};
}

SurfacePair two_cylinders_pair() {
    const double r = 1.0;
    const double half_len = 1.5 * r;
    const Profile prof = semicircle_profile(r, 8);
    const KnotVector axis = KnotVector::clamped_uniform(1, 1);
    std::vector<Point3> g1;
    std::vector<Point3> g2;
    for (const auto& q : prof.points) {
        for (const double end : {-half_len, half_len}) {
            g1.emplace_back(q[0], end, q[1]);
            g2.emplace_back(end, q[0], q[1]);
        }
    }
    return {"two-cylinders", "two arched half-cylinders with orthogonal axes crossing at the top",
            BSplineSurface(prof.knots, axis, std::move(g1)), BSplineSurface(prof.knots, axis, std::move(g2))};
}

SurfacePair tangent_paraboloid_pair() {
    return {"tangent-paraboloid", "plane z=0 touching the paraboloid z=x^2+y^2 at the origin", plane_z0(),
            bezier_from_function(2, 2, [](double u, double v) {
                const double x = 2 * u - 1;
                const double y = 2 * v - 1;
                return Point3(x, y, x * x + y * y);
            })};
}

SurfacePair disjoint_pair() {
    return {"disjoint", "two parallel planes one unit apart", plane_z0(),
            bezier_from_function(1, 1, [](double u, double v) { return Point3(2 * u - 1, 2 * v - 1, 1.0); })};
}

SurfacePair periodic_seam_pair() {
    // Uniform periodic cubic; the curve passes radius 1 at the knots and the
    // seam (s = 0) sits at angle 0.
    const int n = 16;
    const double ring = 6.0 / (4.0 + 2.0 * std::cos(2.0 * std::numbers::pi / n));
    std::vector<Point3> grid;
    for (int i = 0; i < n + 3; ++i) {
        const double a = 2.0 * std::numbers::pi * ((i % n) - 1) / n;
        for (const double z : {-1.0, 1.0}) {
            grid.emplace_back(ring * std::cos(a), ring * std::sin(a), z);
        }
    }
    BSplineSurface cylinder(KnotVector::periodic_uniform(3, n), KnotVector::clamped_uniform(1, 1), std::move(grid));
    BSplineSurface dome = bezier_from_function(2, 2, [](double u, double v) {
        const double y = 1.2 * u - 0.6;
        const double z = 1.2 * v - 0.6;
        return Point3(1.2 - 1.5 * (y * y + z * z), y, z);
    });
    return {"periodic-seam", "a dome crossing a periodic cylinder; the loop straddles the cylinder's seam",
            std::move(dome), std::move(cylinder)};
}

std::vector<std::string> fixture_names() {
    return {"crossed-planes", "double-cross", "two-cylinders", "tangent-paraboloid", "disjoint", "periodic-seam"};
}

SurfacePair fixture(std::string_view name) {
    if (name == "crossed-planes") return crossed_planes_pair();
    if (name == "double-cross") return double_cross_pair();
    if (name == "two-cylinders") return two_cylinders_pair();
    if (name == "tangent-paraboloid") return tangent_paraboloid_pair();
    if (name == "disjoint") return disjoint_pair();
    if (name == "periodic-seam") return periodic_seam_pair();
    throw ConfigError("unknown fixture '" + std::string(name) + "'");
}

}  // namespace sstopo
