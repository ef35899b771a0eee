#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "degeneig/assembly.hpp"
#include "degeneig/errors.hpp"
#include "degeneig/mesh.hpp"
#include "degeneig/rng.hpp"
#include "degeneig/weight.hpp"
#include "doctest.h"

using namespace degeneig;

TEST_CASE("mass matrix is consistent") {
  Mesh mesh = build_unit_square_mesh(6);
  SparseSymMatrix m = assemble_mass(mesh);
  REQUIRE(m.dim() == mesh.nv());

  // 1^T M 1 = |Omega|
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.nv());
  CHECK(m.quadratic_form(ones) == doctest::Approx(1.0).epsilon(1e-13));

  // row sums are the hat function integrals, one third of the vertex star
  Eigen::VectorXd row_sums = m.apply(ones);
  std::vector<double> star(mesh.nv(), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    for (int v : mesh.triangles[t]) star[v] += mesh.areas[t];
  }
  for (int v = 0; v < mesh.nv(); ++v) {
    CHECK(row_sums(v) == doctest::Approx(star[v] / 3.0).epsilon(1e-13));
  }

  // P1 interpolant of x integrates to 1/2 exactly
  Eigen::VectorXd xs(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) xs(v) = mesh.vertices[v].x;
  CHECK(m.bilinear_form(ones, xs) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("constant weight stiffness reproduces the five point stencil") {
  // interior vertex of the structured mesh: diagonal 4, axis neighbors -1,
  // diagonal neighbors 0
  const int n = 4;
  Mesh mesh = build_unit_square_mesh(n);
  AssembledSystem sys = build_system(mesh, WeightSpec::constant(1.0));
  REQUIRE(sys.dim() == (n - 1) * (n - 1));

  // center vertex (2,2) in lattice coordinates
  int center = -1;
  for (int v = 0; v < mesh.nv(); ++v) {
    if (std::abs(mesh.vertices[v].x - 0.5) < 1e-14 &&
        std::abs(mesh.vertices[v].y - 0.5) < 1e-14) {
      center = v;
    }
  }
  REQUIRE(center >= 0);
  int rc = sys.interior_index[center];
  REQUIRE(rc >= 0);

  Eigen::VectorXd e = Eigen::VectorXd::Zero(sys.dim());
  e(rc) = 1.0;
  Eigen::VectorXd row = sys.stiffness.apply(e);
  CHECK(row(rc) == doctest::Approx(4.0).epsilon(1e-13));
  double off_sum = 0.0;
  for (int j = 0; j < sys.dim(); ++j) {
    if (j != rc) {
      off_sum += row(j);
      CHECK((std::abs(row(j)) < 1e-13 || std::abs(row(j) + 1.0) < 1e-13));
    }
  }
  CHECK(off_sum == doctest::Approx(-4.0).epsilon(1e-13));
}

TEST_CASE("constant weight scales the stiffness linearly") {
  Mesh mesh = build_unit_square_mesh(5);
  SparseSymMatrix k1 = assemble_stiffness(mesh, WeightSpec::constant(1.0));
  SparseSymMatrix k3 = assemble_stiffness(mesh, WeightSpec::constant(3.0));
  Rng rng(7);
  Eigen::VectorXd u(k1.dim());
  for (int i = 0; i < u.size(); ++i) u(i) = rng.uniform(-1.0, 1.0);
  CHECK(k3.quadratic_form(u) == doctest::Approx(3.0 * k1.quadratic_form(u)).epsilon(1e-13));
}

TEST_CASE("constant potential gives an exact mass multiple") {
  Mesh mesh = build_unit_square_mesh(6);
  SparseSymMatrix m = assemble_mass(mesh);
  const double c = 2.75;
  SparseSymMatrix mc = assemble_potential(mesh, std::vector<double>(mesh.nv(), c));
  REQUIRE(mc.dim() == m.dim());
  REQUIRE(mc.values().size() == m.values().size());
  for (size_t i = 0; i < m.values().size(); ++i) {
    CHECK(mc.values()[i] == doctest::Approx(c * m.values()[i]).epsilon(1e-12));
  }
}

TEST_CASE("potential matrix integrates rho exactly for cubics") {
  // 1^T M_rho 1 = int rho_h = sum_v rho_v int phi_v
  Mesh mesh = build_unit_square_mesh(5);
  Rng rng(11);
  std::vector<double> rho(mesh.nv());
  for (double& r : rho) r = rng.uniform(-2.0, 2.0);
  SparseSymMatrix mr = assemble_potential(mesh, rho);

  std::vector<double> star(mesh.nv(), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    for (int v : mesh.triangles[t]) star[v] += mesh.areas[t];
  }
  double exact = 0.0;
  for (int v = 0; v < mesh.nv(); ++v) exact += rho[v] * star[v] / 3.0;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.nv());
  CHECK(mr.quadratic_form(ones) == doctest::Approx(exact).epsilon(1e-12));

  std::vector<double> bad = rho;
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(assemble_potential(mesh, bad), InvalidArgumentError);
}

TEST_CASE("degenerate weight assembly stays finite and positive") {
  Mesh mesh = build_unit_square_mesh(8);
  for (double alpha : {0.5, 1.0, 1.5}) {
    AssembledSystem sys =
        build_system(mesh, WeightSpec::point_degenerate(alpha, {0.0, 0.0}));
    for (double v : sys.stiffness.values()) CHECK(std::isfinite(v));
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd u(sys.dim());
      for (int i = 0; i < u.size(); ++i) u(i) = rng.uniform(-1.0, 1.0);
      CHECK(sys.stiffness.quadratic_form(u) > 0.0);
    }
  }
}

TEST_CASE("reduction maps interior vertices consistently") {
  Mesh mesh = build_unit_square_mesh(5);
  AssembledSystem sys = build_system(mesh, WeightSpec::constant(1.0));

  int interior = 0;
  for (int v = 0; v < mesh.nv(); ++v) {
    if (mesh.boundary[v]) {
      CHECK(sys.interior_index[v] == -1);
    } else {
      CHECK(sys.interior_index[v] >= 0);
      CHECK(sys.vertex_of_reduced[sys.interior_index[v]] == v);
      ++interior;
    }
  }
  CHECK(sys.dim() == interior);

  // round trip through full vertex numbering
  Rng rng(3);
  Eigen::VectorXd u(sys.dim());
  for (int i = 0; i < u.size(); ++i) u(i) = rng.uniform(-1.0, 1.0);
  std::vector<double> full = sys.to_full(u);
  for (int v = 0; v < mesh.nv(); ++v) {
    if (mesh.boundary[v]) CHECK(full[v] == 0.0);
  }
  Eigen::VectorXd back = sys.to_reduced(full);
  for (int i = 0; i < u.size(); ++i) CHECK(back(i) == u(i));
}

TEST_CASE("weighted h1 norm") {
  Mesh mesh = build_unit_square_mesh(4);
  AssembledSystem sys = build_system(mesh, WeightSpec::constant(1.0));
  Eigen::VectorXd u = Eigen::VectorXd::Ones(sys.dim());
  CHECK(weighted_h1_norm(sys.stiffness, u) ==
        doctest::Approx(std::sqrt(sys.stiffness.quadratic_form(u))).epsilon(1e-14));
  Eigen::VectorXd wrong = Eigen::VectorXd::Ones(sys.dim() + 1);
  CHECK_THROWS_AS(weighted_h1_norm(sys.stiffness, wrong), InvalidArgumentError);
}

TEST_CASE("meshes without interior vertices are rejected") {
  Mesh tri = Mesh::create({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}});
  CHECK_THROWS_AS(build_system(tri, WeightSpec::constant(1.0)), InvalidMeshError);
}
