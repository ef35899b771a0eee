#include "degeneig/assembly.hpp"

#include <cmath>
#include <cstdlib>

#include "degeneig/errors.hpp"
#include "degeneig/quadrature.hpp"

namespace degeneig {

namespace {

constexpr int kSingularLevels = 3;

bool triangle_touches(const Mesh& mesh, int t, const Vec2& p) {
  for (int v : mesh.triangles[t]) {
    if (dist(mesh.vertices[v], p) < 1e-14) return true;
  }
  return false;
}

// int_T w for one triangle; switches to the subdividing rule when the
// degeneracy point is a vertex of T (the integrand is singular there for
// alpha < 0 only, but accuracy still profits from the grading).
double weight_integral(const Mesh& mesh, int t, const WeightSpec& spec) {
  if (spec.kind == WeightKind::constant) return spec.c0 * mesh.areas[t];
  const Vec2 a = mesh.vertices[mesh.triangles[t][0]];
  const Vec2 b = mesh.vertices[mesh.triangles[t][1]];
  const Vec2 c = mesh.vertices[mesh.triangles[t][2]];
  auto f = [&](const Vec2& p) { return eval_weight(spec, p); };
  if (triangle_touches(mesh, t, spec.x0)) {
    return integrate_triangle_singular(a, b, c, spec.x0, kSingularLevels, f);
  }
  return integrate_triangle(a, b, c, f);
}

void check_triangle_areas(const Mesh& mesh) {
  if (mesh.nt() == 0) throw InvalidMeshError("mesh has no triangles");
  double mean = mesh.total_area() / static_cast<double>(mesh.nt());
  for (int t = 0; t < mesh.nt(); ++t) {
    if (!(mesh.areas[t] > 1e-14 * mean)) {
      throw InvalidMeshError("degenerate triangle in assembly");
    }
  }
}

}  // namespace

Eigen::VectorXd AssembledSystem::to_reduced(const std::vector<double>& full_field) const {
  if (static_cast<int>(full_field.size()) != full_dim) {
    throw InvalidArgumentError("field length does not match vertex count");
  }
  Eigen::VectorXd out(dim());
  for (int r = 0; r < dim(); ++r) out(r) = full_field[vertex_of_reduced[r]];
  return out;
}

std::vector<double> AssembledSystem::to_full(const Eigen::VectorXd& reduced) const {
  if (reduced.size() != dim()) {
    throw InvalidArgumentError("vector length does not match reduced dimension");
  }
  std::vector<double> out(full_dim, 0.0);
  for (int r = 0; r < dim(); ++r) out[vertex_of_reduced[r]] = reduced(r);
  return out;
}

std::vector<int> interior_index_of(const Mesh& mesh) {
  std::vector<int> idx(mesh.nv(), -1);
  int next = 0;
  for (int v = 0; v < mesh.nv(); ++v) {
    if (!mesh.boundary[v]) idx[v] = next++;
  }
  return idx;
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh, const WeightSpec& spec) {
  spec.validate();
  check_triangle_areas(mesh);
  std::vector<int> idx = interior_index_of(mesh);
  int n = 0;
  for (int v : idx)
    if (v >= 0) ++n;
  if (n == 0) throw InvalidMeshError("no interior vertices");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(mesh.nt()) * 6);
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.vertices[tri[0]];
    const Vec2 b = mesh.vertices[tri[1]];
    const Vec2 c = mesh.vertices[tri[2]];
    const double area = mesh.areas[t];
    // grad(phi_i) = perp(opposite edge) / (2 area), constant on T
    const Vec2 g[3] = {
        {(b.y - c.y) / (2 * area), (c.x - b.x) / (2 * area)},
        {(c.y - a.y) / (2 * area), (a.x - c.x) / (2 * area)},
        {(a.y - b.y) / (2 * area), (b.x - a.x) / (2 * area)},
    };
    const double wint = weight_integral(mesh, t, spec);
    for (int i = 0; i < 3; ++i) {
      const int ri = idx[tri[i]];
      if (ri < 0) continue;
      for (int j = i; j < 3; ++j) {
        const int rj = idx[tri[j]];
        if (rj < 0) continue;
        entries.push_back({ri, rj, wint * dot(g[i], g[j])});
      }
    }
  }
  return SparseSymMatrix::from_triplets(n, entries);
}

SparseSymMatrix assemble_mass(const Mesh& mesh) {
  check_triangle_areas(mesh);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(mesh.nt()) * 6);
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double s = mesh.areas[t] / 12.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        entries.push_back({tri[i], tri[j], (i == j ? 2.0 : 1.0) * s});
      }
    }
  }
  return SparseSymMatrix::from_triplets(mesh.nv(), entries);
}

SparseSymMatrix assemble_potential(const Mesh& mesh, const std::vector<double>& rho) {
  check_triangle_areas(mesh);
  if (static_cast<int>(rho.size()) != mesh.nv()) {
    throw InvalidArgumentError("potential field length does not match vertex count");
  }
  for (double v : rho) {
    if (!std::isfinite(v)) throw InvalidArgumentError("potential value is not finite");
  }
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(mesh.nt()) * 6);
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.areas[t];
    // int_T phi_a phi_b phi_c = A/10 (all equal), A/30 (two equal), A/60 (distinct)
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double acc = 0.0;
        for (int m = 0; m < 3; ++m) {
          double coef;
          if (i == j && j == m) {
            coef = area / 10.0;
          } else if (i == j || j == m || i == m) {
            coef = area / 30.0;
          } else {
            coef = area / 60.0;
          }
          acc += coef * rho[tri[m]];
        }
        entries.push_back({tri[i], tri[j], acc});
      }
    }
  }
  return SparseSymMatrix::from_triplets(mesh.nv(), entries);
}

SparseSymMatrix assemble_potential(const Mesh& mesh, double constant_rho) {
  return assemble_potential(mesh, std::vector<double>(mesh.nv(), constant_rho));
}

SparseSymMatrix reduce_matrix(const SparseSymMatrix& full,
                              const std::vector<int>& interior_index) {
  if (static_cast<int>(interior_index.size()) != full.dim()) {
    throw InvalidArgumentError("interior index length does not match matrix dimension");
  }
  int n = 0;
  for (int v : interior_index) {
    if (v >= n) n = v + 1;
  }
  if (n == 0) throw InvalidArgumentError("interior index selects nothing");
  std::vector<Triplet> entries;
  const auto& rp = full.row_ptr();
  const auto& ci = full.col_idx();
  const auto& vals = full.values();
  for (int r = 0; r < full.dim(); ++r) {
    const int rr = interior_index[r];
    if (rr < 0) continue;
    for (int p = rp[r]; p < rp[r + 1]; ++p) {
      const int cc = interior_index[ci[p]];
      if (cc < 0) continue;
      entries.push_back({rr, cc, vals[p]});
    }
  }
  return SparseSymMatrix::from_triplets(n, entries);
}

AssembledSystem build_system(const Mesh& mesh, const WeightSpec& spec) {
  AssembledSystem sys;
  sys.interior_index = interior_index_of(mesh);
  sys.full_dim = mesh.nv();
  for (int v = 0; v < mesh.nv(); ++v) {
    if (sys.interior_index[v] >= 0) sys.vertex_of_reduced.push_back(v);
  }
  if (sys.vertex_of_reduced.empty()) throw InvalidMeshError("no interior vertices");
  sys.stiffness = assemble_stiffness(mesh, spec);
  sys.mass = reduce_matrix(assemble_mass(mesh), sys.interior_index);
  return sys;
}

double weighted_h1_norm(const SparseSymMatrix& k, const Eigen::VectorXd& u) {
  if (u.size() != k.dim()) {
    throw InvalidArgumentError("vector length does not match matrix dimension");
  }
  return std::sqrt(std::max(0.0, k.quadratic_form(u)));
}

}  // namespace degeneig
