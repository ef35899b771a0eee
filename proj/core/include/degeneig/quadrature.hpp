#pragma once

#include <array>
#include <functional>
#include <vector>

#include "degeneig/geometry.hpp"

namespace degeneig {

// Symmetric 7-point triangle rule, exact for polynomials of degree 5.
// Weights are normalized to sum to 1; integrals scale by the triangle area.
struct TriangleRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> weights;
};

const TriangleRule& degree5_rule();

// Integral of f over the triangle (a, b, c) with the degree-5 rule.
double integrate_triangle(Vec2 a, Vec2 b, Vec2 c,
                          const std::function<double(Vec2)>& f);

// Same integral, but with `levels` rounds of geometric subdivision toward
// the singular corner s (one of a, b, c). Each round splits off the half
// of the triangle away from s and recurses on the half containing s, so
// quadrature cells shrink geometrically toward the singularity while no
// node is ever placed at s itself.
double integrate_triangle_singular(Vec2 a, Vec2 b, Vec2 c, Vec2 s, int levels,
                                   const std::function<double(Vec2)>& f);

// Gauss-Legendre nodes and weights on [0, 1]. Nodes lie strictly inside
// the interval. n >= 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

}  // namespace degeneig
