#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "degeneig/geometry.hpp"

namespace degeneig {

// Conforming triangulation with Dirichlet boundary flags.
//
// Invariants established by the factory functions:
//   - triangle vertices are counterclockwise (positive signed area),
//   - every undirected edge is shared by at most two triangles, and each
//     directed edge appears at most once (consistent orientation),
//   - boundary flags cover every vertex incident to a rim edge (an edge
//     owned by exactly one triangle); files may flag extra vertices, which
//     act as additional Dirichlet pins.
//
// Treat instances as immutable; all operations return new meshes.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> boundary;           // per-vertex Dirichlet flag
  std::vector<double> areas;                    // per-triangle, positive
  std::vector<std::array<int, 3>> neighbors;    // across edge (v[e], v[e+1]), -1 if rim
  std::size_t edge_count = 0;

  int nv() const { return static_cast<int>(vertices.size()); }
  int nt() const { return static_cast<int>(triangles.size()); }
  double total_area() const;
  int boundary_count() const;

  // Validates connectivity and orientation, computes areas, adjacency and
  // topological boundary flags. Throws InvalidMeshError or
  // NonConformingMeshError on malformed input.
  static Mesh create(std::vector<Vec2> vertices,
                     std::vector<std::array<int, 3>> triangles);

  // Same, but keeps the supplied flags after checking they cover the
  // topological rim.
  static Mesh create_with_flags(std::vector<Vec2> vertices,
                                std::vector<std::array<int, 3>> triangles,
                                std::vector<std::uint8_t> flags);
};

// Links a submesh to the mesh it was extracted from.
struct SubmeshMap {
  Mesh child;
  std::vector<int> parent_vertex_of;    // child vertex -> parent vertex (injective)
  std::vector<int> parent_triangle_of;  // child triangle -> parent triangle
};

// Structured triangulation of [0,1]^2, each cell split along the diagonal
// in the (1,1) direction: 2n^2 triangles, (n+1)^2 vertices. The vertex set
// and triangle set are invariant under the swap (x,y) -> (y,x). n >= 2.
Mesh build_unit_square_mesh(int n);

// Triangulation of [0,1]^2 with both diagonals per cell (cell centers added):
// 4n^2 triangles, (n+1)^2 + n^2 vertices. Invariant under the full symmetry
// group of the square, so eigenvalue pairs forced degenerate by symmetry are
// exactly degenerate in the discrete pencil as well. n >= 2.
Mesh build_unit_square_crisscross_mesh(int n);

// Splits every triangle into four by its edge midpoints.
Mesh refine_uniform(const Mesh& mesh);

// Graded refinement toward the point x0: `depth` rounds, where round d
// refines all triangles within radius0 * 0.5^d of x0 (red split) and
// restores conformity with green bisections. depth >= 0, radius0 > 0.
Mesh refine_toward(const Mesh& mesh, Vec2 x0, int depth, double radius0);

// Child mesh consisting of the selected triangles; child boundary flags are
// recomputed from the child's topological rim.
SubmeshMap extract_submesh(const Mesh& mesh, const std::vector<int>& triangle_subset);

// Zero-extension of a child vertex field to the parent. The field must
// vanish on child boundary vertices (relative tolerance 1e-12).
std::vector<double> extend_by_zero(const std::vector<double>& sub_field,
                                   const SubmeshMap& map, const Mesh& parent);

// Restriction of a parent vertex field to child vertices.
std::vector<double> restrict_to_child(const std::vector<double>& parent_field,
                                      const SubmeshMap& map);

}  // namespace degeneig
