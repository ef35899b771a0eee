#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "degeneig/errors.hpp"
#include "degeneig/io.hpp"
#include "degeneig/mesh.hpp"
#include "doctest.h"

using namespace degeneig;

TEST_CASE("structured square mesh counts") {
  Mesh m2 = build_unit_square_mesh(2);
  CHECK(m2.nv() == 9);
  CHECK(m2.nt() == 8);
  CHECK(m2.boundary_count() == 8);

  Mesh m4 = build_unit_square_mesh(4);
  CHECK(m4.nv() == 25);
  CHECK(m4.nt() == 32);
  CHECK(m4.boundary_count() == 16);

  CHECK_THROWS_AS(build_unit_square_mesh(1), InvalidArgumentError);
}

TEST_CASE("square mesh area and Euler characteristic") {
  for (int n : {2, 5, 16}) {
    Mesh m = build_unit_square_mesh(n);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    // disc topology: V - E + T = 1
    CHECK(m.nv() - static_cast<int>(m.edge_count) + m.nt() == 1);
  }
}

TEST_CASE("crisscross mesh counts and symmetry") {
  for (int n : {2, 8}) {
    Mesh m = build_unit_square_crisscross_mesh(n);
    CHECK(m.nv() == (n + 1) * (n + 1) + n * n);
    CHECK(m.nt() == 4 * n * n);
    CHECK(m.boundary_count() == 4 * n);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.nv() - static_cast<int>(m.edge_count) + m.nt() == 1);
  }

  // vertex set is closed under the four reflections of the square
  Mesh m = build_unit_square_crisscross_mesh(4);
  auto has_vertex = [&](double x, double y) {
    for (const Vec2& p : m.vertices) {
      if (std::abs(p.x - x) < 1e-12 && std::abs(p.y - y) < 1e-12) return true;
    }
    return false;
  };
  for (const Vec2& p : m.vertices) {
    CHECK(has_vertex(p.y, p.x));
    CHECK(has_vertex(1.0 - p.x, p.y));
    CHECK(has_vertex(p.x, 1.0 - p.y));
  }
}

TEST_CASE("uniform refinement quadruples triangles") {
  Mesh m = build_unit_square_mesh(2);
  Mesh r = refine_uniform(m);
  CHECK(r.nt() == 32);
  CHECK(r.total_area() == doctest::Approx(1.0).epsilon(1e-12));

  // two refinements of n reproduce the 4n structured mesh
  Mesh twice = refine_uniform(refine_uniform(build_unit_square_mesh(4)));
  Mesh direct = build_unit_square_mesh(16);
  CHECK(twice.nv() == direct.nv());
  CHECK(twice.nt() == direct.nt());
  CHECK(twice.boundary_count() == direct.boundary_count());

  auto sorted_coords = [](const Mesh& mesh) {
    std::vector<std::pair<double, double>> c;
    for (const Vec2& p : mesh.vertices) c.emplace_back(p.x, p.y);
    std::sort(c.begin(), c.end());
    return c;
  };
  auto a = sorted_coords(twice);
  auto b = sorted_coords(direct);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == doctest::Approx(b[i].first).epsilon(1e-13));
    CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-13));
  }
}

TEST_CASE("graded refinement keeps area and conformity") {
  Mesh m = build_unit_square_mesh(4);
  Mesh g = refine_toward(m, {0.0, 0.0}, 2, 0.5);
  CHECK(g.nt() > m.nt());
  CHECK(g.total_area() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.nv() - static_cast<int>(g.edge_count) + g.nt() == 1);

  // smallest triangle ends up near the grading center
  int arg_min = 0;
  for (int t = 1; t < g.nt(); ++t) {
    if (g.areas[t] < g.areas[arg_min]) arg_min = t;
  }
  const auto& tri = g.triangles[arg_min];
  Vec2 c = (1.0 / 3.0) * (g.vertices[tri[0]] + g.vertices[tri[1]] + g.vertices[tri[2]]);
  CHECK(std::hypot(c.x, c.y) < 0.5);

  CHECK_THROWS_AS(refine_toward(m, {0.0, 0.0}, -1, 0.5), InvalidArgumentError);
  CHECK_THROWS_AS(refine_toward(m, {0.0, 0.0}, 1, 0.0), InvalidArgumentError);
}

TEST_CASE("create validates input") {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(Mesh::create(v, {{{0, 1, 5}}}), InvalidMeshError);
  CHECK_THROWS_AS(Mesh::create(v, {{{0, 1, 1}}}), InvalidMeshError);
  // clockwise triangle
  CHECK_THROWS_AS(Mesh::create(v, {{{0, 2, 1}}}), InvalidMeshError);
  // same directed edge twice
  std::vector<Vec2> v4{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK_THROWS_AS(Mesh::create(v4, {{{0, 1, 2}}, {{1, 3, 2}}, {{0, 1, 3}}}),
                  NonConformingMeshError);
  // flags must cover the rim
  CHECK_THROWS_AS(Mesh::create_with_flags(v, {{{0, 1, 2}}}, {0, 0, 0}), InvalidMeshError);
}

TEST_CASE("submesh extraction and zero extension round trip") {
  Mesh m = build_unit_square_mesh(4);
  std::vector<int> lower;
  for (int t = 0; t < m.nt(); ++t) {
    const auto& tri = m.triangles[t];
    Vec2 c = (1.0 / 3.0) * (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]);
    if (c.y < 0.5) lower.push_back(t);
  }
  SubmeshMap sub = extract_submesh(m, lower);
  CHECK(sub.child.nt() == static_cast<int>(lower.size()));
  CHECK(sub.child.total_area() == doctest::Approx(0.5).epsilon(1e-12));

  // cut edge becomes child boundary
  for (int cv = 0; cv < sub.child.nv(); ++cv) {
    int pv = sub.parent_vertex_of[cv];
    if (m.boundary[pv]) CHECK(sub.child.boundary[cv] == 1);
  }

  std::vector<double> f(sub.child.nv(), 0.0);
  for (int cv = 0; cv < sub.child.nv(); ++cv) {
    if (!sub.child.boundary[cv]) f[cv] = 1.0 + cv;
  }
  std::vector<double> big = extend_by_zero(f, sub, m);
  std::vector<double> back = restrict_to_child(big, sub);
  for (int cv = 0; cv < sub.child.nv(); ++cv) CHECK(back[cv] == f[cv]);

  // nonzero value on the cut must be rejected
  std::vector<double> bad(sub.child.nv(), 1.0);
  CHECK_THROWS_AS(extend_by_zero(bad, sub, m), PreconditionError);

  CHECK_THROWS_AS(extract_submesh(m, {}), InvalidArgumentError);
  CHECK_THROWS_AS(extract_submesh(m, {m.nt()}), InvalidArgumentError);
}

TEST_CASE("mesh file round trip is bit exact") {
  Mesh m = refine_toward(build_unit_square_mesh(3), {0.0, 0.0}, 1, 0.6);
  std::ostringstream first;
  write_mesh(first, m);
  std::istringstream in(first.str());
  Mesh back = read_mesh(in);
  REQUIRE(back.nv() == m.nv());
  REQUIRE(back.nt() == m.nt());
  std::ostringstream second;
  write_mesh(second, back);
  CHECK(first.str() == second.str());
  for (int v = 0; v < m.nv(); ++v) {
    CHECK(back.vertices[v].x == m.vertices[v].x);
    CHECK(back.vertices[v].y == m.vertices[v].y);
    CHECK(back.boundary[v] == m.boundary[v]);
  }
  std::istringstream junk("degenmesh 2\n");
  CHECK_THROWS_AS(read_mesh(junk), IoError);
}
