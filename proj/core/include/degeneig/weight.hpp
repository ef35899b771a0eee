#pragma once

#include <string>
#include <vector>

#include "degeneig/geometry.hpp"
#include "degeneig/mesh.hpp"

namespace degeneig {

enum class WeightKind { constant, point_degenerate };

// Coefficient w of the form  -div(w grad u) = lambda u.
// constant:         w = c0 > 0 everywhere
// point_degenerate: w = |x - x0|^alpha with 0 < alpha < 2; w vanishes only
//                   at x0, which is expected to lie on the domain boundary.
struct WeightSpec {
  WeightKind kind = WeightKind::constant;
  double alpha = 0.0;
  Vec2 x0{0.0, 0.0};
  double c0 = 1.0;

  static WeightSpec constant(double c0);
  static WeightSpec point_degenerate(double alpha, Vec2 x0);

  void validate() const;  // throws InvalidArgumentError
  std::string describe() const;
};

double eval_weight(const WeightSpec& spec, Vec2 p);

// (2/alpha)^2, the constant in the weighted Hardy inequality
//   int |x-x0|^(alpha-2) u^2 <= (2/alpha)^2 int |x-x0|^alpha |grad u|^2
// for u vanishing on the boundary. +infinity for constant weights.
double hardy_constant(const WeightSpec& spec);

// Lower bound for the Muckenhoupt A2 constant of w over the box [lo, hi]:
// the max of (avg_K w)(avg_K w^-1) over all dyadic sub-squares K of the box
// down to `depth` levels (depth >= 1; level 0 is the box itself). Averages
// use tensor Gauss-Legendre quadrature with `quad_order` points per axis;
// nodes are cell-interior, so w is never sampled at x0 exactly.
double estimate_a2_constant(const WeightSpec& spec, Vec2 lo, Vec2 hi,
                            int depth, int quad_order);

// (int |x-x0|^(alpha-2) u^2) / (int |x-x0|^alpha |grad u|^2) for the P1
// interpolant u of a boundary-vanishing vertex field. Compare against
// hardy_constant(spec). Triangles touching x0 are integrated with 3 levels
// of subdivision toward the singularity.
double hardy_ratio(const Mesh& mesh, const WeightSpec& spec,
                   const std::vector<double>& field);

// (int u^2) / (int w |grad u|^2); bounded by 1/lambda_1 of the pencil.
double poincare_ratio(const Mesh& mesh, const WeightSpec& spec,
                      const std::vector<double>& field);

// Summary block for reports.
struct WeightDiagnostics {
  double a2_estimate = 1.0;          // lower bound, >= 1
  double hardy_constant_bound = 0.0; // (2/alpha)^2, +inf for constant kind
  double poincare_ratio_max = 0.0;   // observed max over tested fields
};

}  // namespace degeneig
