#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sstopo/geometry.hpp"

namespace sstopo {

/// Named surface pair with a known intersection topology.
struct SurfacePair {
    std::string name;
    std::string description;
    BSplineSurface first;
    BSplineSurface second;
};

/// Single-span (Bezier) surface of degree (deg_u, deg_v) on [0,1]^2 that
/// interpolates `f` at uniform nodes. Exact when `f` is a polynomial of that
/// degree in each parameter.
BSplineSurface bezier_from_function(int deg_u, int deg_v, const std::function<Point3(double, double)>& f);

/// Plane z = 0 against the saddle z = xy over [-1,1]^2: two crossing lines.
SurfacePair crossed_planes_pair();
/// Plane z = 0 against z = 2y(x^2 - 1/4): a line crossed by two others.
SurfacePair double_cross_pair();
/// Two arched half-cylinders of equal radius with orthogonal axes.
SurfacePair two_cylinders_pair();
/// Plane z = 0 touching the paraboloid z = x^2 + y^2 at one point.
SurfacePair tangent_paraboloid_pair();
/// Two parallel planes one unit apart.
SurfacePair disjoint_pair();
/// A dome poking through a periodic cylinder across its seam.
SurfacePair periodic_seam_pair();

std::vector<std::string> fixture_names();
SurfacePair fixture(std::string_view name);

}  // namespace sstopo
