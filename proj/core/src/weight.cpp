#include "degeneig/weight.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "degeneig/errors.hpp"
#include "degeneig/quadrature.hpp"

namespace degeneig {

WeightSpec WeightSpec::constant(double c0) {
  WeightSpec spec;
  spec.kind = WeightKind::constant;
  spec.c0 = c0;
  spec.validate();
  return spec;
}

WeightSpec WeightSpec::point_degenerate(double alpha, Vec2 x0) {
  WeightSpec spec;
  spec.kind = WeightKind::point_degenerate;
  spec.alpha = alpha;
  spec.x0 = x0;
  spec.validate();
  return spec;
}

void WeightSpec::validate() const {
  if (kind == WeightKind::constant) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
      throw InvalidArgumentError("constant weight needs c0 > 0");
    }
    return;
  }
  if (!(alpha > 0.0) || !(alpha < 2.0)) {
    throw InvalidArgumentError("point-degenerate weight needs 0 < alpha < 2");
  }
  if (!std::isfinite(x0.x) || !std::isfinite(x0.y)) {
    throw InvalidArgumentError("x0 must be finite");
  }
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  if (kind == WeightKind::constant) {
    os << "constant c0=" << c0;
  } else {
    os << "|x-x0|^" << alpha << " x0=(" << x0.x << "," << x0.y << ")";
  }
  return os.str();
}

double eval_weight(const WeightSpec& spec, Vec2 p) {
  if (spec.kind == WeightKind::constant) return spec.c0;
  double r2 = (p.x - spec.x0.x) * (p.x - spec.x0.x) +
              (p.y - spec.x0.y) * (p.y - spec.x0.y);
  return std::pow(r2, 0.5 * spec.alpha);
}

double hardy_constant(const WeightSpec& spec) {
  if (spec.kind == WeightKind::constant) {
    return std::numeric_limits<double>::infinity();
  }
  return (2.0 / spec.alpha) * (2.0 / spec.alpha);
}

double estimate_a2_constant(const WeightSpec& spec, Vec2 lo, Vec2 hi,
                            int depth, int quad_order) {
  spec.validate();
  if (depth < 1) throw InvalidArgumentError("a2 depth must be >= 1");
  if (quad_order < 2) throw InvalidArgumentError("a2 quad_order must be >= 2");
  if (!(hi.x > lo.x) || !(hi.y > lo.y)) {
    throw InvalidArgumentError("a2 box must have positive extent");
  }
  if (spec.kind == WeightKind::constant) return 1.0;

  const GaussRule g = gauss_legendre(quad_order);
  double best = 1.0;
  for (int level = 0; level <= depth; ++level) {
    const int m = 1 << level;
    const double dx = (hi.x - lo.x) / m;
    const double dy = (hi.y - lo.y) / m;
    for (int cj = 0; cj < m; ++cj) {
      for (int ci = 0; ci < m; ++ci) {
        const double x0 = lo.x + ci * dx;
        const double y0 = lo.y + cj * dy;
        double avg_w = 0.0, avg_winv = 0.0;
        for (int a = 0; a < quad_order; ++a) {
          for (int b = 0; b < quad_order; ++b) {
            Vec2 p{x0 + g.nodes[a] * dx, y0 + g.nodes[b] * dy};
            double w = eval_weight(spec, p);
            if (w == 0.0) {
              // Gauss nodes are cell-interior, so this only happens when x0
              // falls exactly on a node; nudge toward the cell center.
              p.x += 0.25 * dx / quad_order;
              w = eval_weight(spec, p);
            }
            const double gw = g.weights[a] * g.weights[b];
            avg_w += gw * w;
            avg_winv += gw / w;
          }
        }
        best = std::max(best, avg_w * avg_winv);
      }
    }
  }
  return best;
}

namespace {

struct P1Patch {
  Vec2 p[3];
  double u[3];
  Vec2 grad;  // constant per triangle

  double value(Vec2 q) const {
    // Barycentric evaluation via the standard area ratios.
    double det = cross(p[1] - p[0], p[2] - p[0]);
    double l1 = cross(q - p[0], p[2] - p[0]) / det;
    double l2 = cross(p[1] - p[0], q - p[0]) / det;
    double l0 = 1.0 - l1 - l2;
    return l0 * u[0] + l1 * u[1] + l2 * u[2];
  }
};

Vec2 p1_gradient(const Vec2 p[3], const double u[3]) {
  double det = cross(p[1] - p[0], p[2] - p[0]);
  double gx = ((u[1] - u[0]) * (p[2].y - p[0].y) -
               (u[2] - u[0]) * (p[1].y - p[0].y)) / det;
  double gy = ((u[2] - u[0]) * (p[1].x - p[0].x) -
               (u[1] - u[0]) * (p[2].x - p[0].x)) / det;
  return {gx, gy};
}

bool touches(const Vec2 p[3], Vec2 x0, int* corner) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(p[i].x - x0.x) < 1e-14 && std::abs(p[i].y - x0.y) < 1e-14) {
      *corner = i;
      return true;
    }
  }
  return false;
}

constexpr int kSingularLevels = 3;

void check_boundary_vanishing(const Mesh& mesh, const std::vector<double>& field) {
  if (static_cast<int>(field.size()) != mesh.nv()) {
    throw InvalidArgumentError("field size does not match vertex count");
  }
  double scale = 0.0;
  for (double v : field) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw UndefinedRatioError("field is identically zero");
  for (int v = 0; v < mesh.nv(); ++v) {
    if (mesh.boundary[v] && std::abs(field[v]) > 1e-12 * scale) {
      throw PreconditionError("field does not vanish on boundary vertices");
    }
  }
}

}  // namespace

double hardy_ratio(const Mesh& mesh, const WeightSpec& spec,
                   const std::vector<double>& field) {
  spec.validate();
  if (spec.kind != WeightKind::point_degenerate) {
    throw InvalidArgumentError("hardy_ratio needs a point-degenerate weight");
  }
  check_boundary_vanishing(mesh, field);

  const Vec2 x0 = spec.x0;
  const double alpha = spec.alpha;
  double num = 0.0, den = 0.0;
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tri = mesh.triangles[t];
    P1Patch patch;
    for (int e = 0; e < 3; ++e) {
      patch.p[e] = mesh.vertices[tri[e]];
      patch.u[e] = field[tri[e]];
    }
    Vec2 grad = p1_gradient(patch.p, patch.u);
    const double g2 = dot(grad, grad);
    auto f_num = [&](Vec2 q) {
      double r2 = dot(q - x0, q - x0);
      double u = patch.value(q);
      return std::pow(r2, 0.5 * (alpha - 2.0)) * u * u;
    };
    auto f_den = [&](Vec2 q) {
      double r2 = dot(q - x0, q - x0);
      return std::pow(r2, 0.5 * alpha) * g2;
    };
    int corner = -1;
    if (touches(patch.p, x0, &corner)) {
      num += integrate_triangle_singular(patch.p[0], patch.p[1], patch.p[2], x0,
                                         kSingularLevels, f_num);
      den += integrate_triangle_singular(patch.p[0], patch.p[1], patch.p[2], x0,
                                         kSingularLevels, f_den);
    } else {
      num += integrate_triangle(patch.p[0], patch.p[1], patch.p[2], f_num);
      den += integrate_triangle(patch.p[0], patch.p[1], patch.p[2], f_den);
    }
  }
  if (!(den > 0.0)) throw UndefinedRatioError("zero weighted gradient energy");
  return num / den;
}

double poincare_ratio(const Mesh& mesh, const WeightSpec& spec,
                      const std::vector<double>& field) {
  spec.validate();
  check_boundary_vanishing(mesh, field);

  double num = 0.0, den = 0.0;
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tri = mesh.triangles[t];
    P1Patch patch;
    for (int e = 0; e < 3; ++e) {
      patch.p[e] = mesh.vertices[tri[e]];
      patch.u[e] = field[tri[e]];
    }
    Vec2 grad = p1_gradient(patch.p, patch.u);
    const double g2 = dot(grad, grad);
    auto f_num = [&](Vec2 q) {
      double u = patch.value(q);
      return u * u;
    };
    auto f_den = [&](Vec2 q) { return eval_weight(spec, q) * g2; };
    num += integrate_triangle(patch.p[0], patch.p[1], patch.p[2], f_num);
    int corner = -1;
    if (spec.kind == WeightKind::point_degenerate && touches(patch.p, spec.x0, &corner)) {
      den += integrate_triangle_singular(patch.p[0], patch.p[1], patch.p[2],
                                         spec.x0, kSingularLevels, f_den);
    } else {
      den += integrate_triangle(patch.p[0], patch.p[1], patch.p[2], f_den);
    }
  }
  if (!(den > 0.0)) throw UndefinedRatioError("zero weighted gradient energy");
  return num / den;
}

}  // namespace degeneig
