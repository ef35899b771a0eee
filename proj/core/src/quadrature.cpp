#include "degeneig/quadrature.hpp"

#include <cmath>

#include "degeneig/errors.hpp"

namespace degeneig {

const TriangleRule& degree5_rule() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double s15 = std::sqrt(15.0);
    // Centroid.
    r.bary[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    r.weights[0] = 9.0 / 40.0;
    // Orbit near edge midpoints.
    const double b1 = (6.0 + s15) / 21.0;
    const double a1 = 1.0 - 2.0 * b1;
    const double w1 = (155.0 + s15) / 1200.0;
    // Orbit near vertices.
    const double b2 = (6.0 - s15) / 21.0;
    const double a2 = 1.0 - 2.0 * b2;
    const double w2 = (155.0 - s15) / 1200.0;
    int q = 1;
    for (auto [a, b, w] : {std::array<double, 3>{a1, b1, w1},
                           std::array<double, 3>{a2, b2, w2}}) {
      r.bary[q] = {a, b, b};
      r.weights[q++] = w;
      r.bary[q] = {b, a, b};
      r.weights[q++] = w;
      r.bary[q] = {b, b, a};
      r.weights[q++] = w;
    }
    return r;
  }();
  return rule;
}

double integrate_triangle(Vec2 a, Vec2 b, Vec2 c,
                          const std::function<double(Vec2)>& f) {
  const TriangleRule& rule = degree5_rule();
  const double area = std::abs(signed_area(a, b, c));
  double acc = 0.0;
  for (int q = 0; q < 7; ++q) {
    const auto& l = rule.bary[q];
    Vec2 p{l[0] * a.x + l[1] * b.x + l[2] * c.x,
           l[0] * a.y + l[1] * b.y + l[2] * c.y};
    acc += rule.weights[q] * f(p);
  }
  return area * acc;
}

double integrate_triangle_singular(Vec2 a, Vec2 b, Vec2 c, Vec2 s, int levels,
                                   const std::function<double(Vec2)>& f) {
  if (levels < 0) throw InvalidArgumentError("subdivision level must be >= 0");
  // Identify the two non-singular corners.
  Vec2 corners[3] = {a, b, c};
  Vec2 p = a, q = b;
  int found = 0;
  for (const Vec2& v : corners) {
    if (v.x == s.x && v.y == s.y) continue;
    (found == 0 ? p : q) = v;
    ++found;
  }
  if (found != 2) {
    throw InvalidArgumentError(
        "singular point must coincide with exactly one triangle corner");
  }
  double total = 0.0;
  for (int l = 0; l < levels; ++l) {
    Vec2 m1 = midpoint(s, p);
    Vec2 m2 = midpoint(s, q);
    Vec2 m3 = midpoint(p, q);
    total += integrate_triangle(m1, p, m3, f);
    total += integrate_triangle(m2, m3, q, f);
    total += integrate_triangle(m1, m3, m2, f);
    p = m1;
    q = m2;
  }
  total += integrate_triangle(s, p, q, f);
  return total;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgumentError("gauss rule needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n over [-1, 1], then map to [0, 1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) {
        p1 = x;
      }
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pnm1 = (n == 1) ? 1.0 : p0;
      pp = n * (x * pn - pnm1) / (x * x - 1.0);
      double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = 0.5 * (1.0 - x);  // descending x -> ascending node
    rule.weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace degeneig
