#include "degeneig/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>

#include "degeneig/errors.hpp"

namespace degeneig {

namespace {

std::uint64_t edge_key(int a, int b, int nv) {
  int lo = std::min(a, b), hi = std::max(a, b);
  return static_cast<std::uint64_t>(lo) * static_cast<std::uint64_t>(nv) +
         static_cast<std::uint64_t>(hi);
}

struct EdgeInfo {
  int tri[2] = {-1, -1};
  int local[2] = {-1, -1};
  int count = 0;
};

using EdgeMap = std::unordered_map<std::uint64_t, EdgeInfo>;

EdgeMap build_edge_map(const std::vector<Vec2>& vertices,
                       const std::vector<std::array<int, 3>>& triangles) {
  const int nv = static_cast<int>(vertices.size());
  EdgeMap edges;
  edges.reserve(triangles.size() * 2);
  std::set<std::pair<int, int>> directed;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    const auto& tri = triangles[t];
    for (int e = 0; e < 3; ++e) {
      int u = tri[e], v = tri[(e + 1) % 3];
      if (!directed.insert({u, v}).second) {
        throw NonConformingMeshError(
            "directed edge " + std::to_string(u) + "->" + std::to_string(v) +
            " appears twice; orientation or conformity violated");
      }
      EdgeInfo& info = edges[edge_key(u, v, nv)];
      if (info.count >= 2) {
        throw NonConformingMeshError("edge shared by more than two triangles");
      }
      info.tri[info.count] = t;
      info.local[info.count] = e;
      ++info.count;
    }
  }
  return edges;
}

Mesh finish(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
            const std::vector<std::uint8_t>* supplied_flags) {
  const int nv = static_cast<int>(vertices.size());
  const int nt = static_cast<int>(triangles.size());
  if (nv < 3 || nt < 1) throw InvalidMeshError("mesh needs >= 3 vertices and >= 1 triangle");
  for (const auto& tri : triangles) {
    for (int v : tri) {
      if (v < 0 || v >= nv) throw InvalidMeshError("triangle vertex index out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw InvalidMeshError("triangle with repeated vertex");
    }
  }

  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.areas.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    double a = signed_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                           mesh.vertices[tri[2]]);
    if (!(a > 0.0)) {
      throw InvalidMeshError("triangle " + std::to_string(t) +
                             " is degenerate or not counterclockwise");
    }
    mesh.areas[t] = a;
  }

  EdgeMap edges = build_edge_map(mesh.vertices, mesh.triangles);
  mesh.edge_count = edges.size();
  mesh.neighbors.assign(nt, {-1, -1, -1});
  std::vector<std::uint8_t> rim(nv, 0);
  for (const auto& [key, info] : edges) {
    (void)key;
    if (info.count == 2) {
      mesh.neighbors[info.tri[0]][info.local[0]] = info.tri[1];
      mesh.neighbors[info.tri[1]][info.local[1]] = info.tri[0];
    } else {
      const auto& tri = mesh.triangles[info.tri[0]];
      rim[tri[info.local[0]]] = 1;
      rim[tri[(info.local[0] + 1) % 3]] = 1;
    }
  }

  if (supplied_flags) {
    if (static_cast<int>(supplied_flags->size()) != nv) {
      throw InvalidMeshError("boundary flag count does not match vertex count");
    }
    for (int v = 0; v < nv; ++v) {
      if (rim[v] && !(*supplied_flags)[v]) {
        throw InvalidMeshError("vertex " + std::to_string(v) +
                               " lies on the rim but is not flagged as boundary");
      }
    }
    mesh.boundary = *supplied_flags;
  } else {
    mesh.boundary = std::move(rim);
  }
  return mesh;
}

}  // namespace

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas) s += a;
  return s;
}

int Mesh::boundary_count() const {
  int c = 0;
  for (std::uint8_t b : boundary) c += b;
  return c;
}

Mesh Mesh::create(std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> triangles) {
  return finish(std::move(vertices), std::move(triangles), nullptr);
}

Mesh Mesh::create_with_flags(std::vector<Vec2> vertices,
                             std::vector<std::array<int, 3>> triangles,
                             std::vector<std::uint8_t> flags) {
  return finish(std::move(vertices), std::move(triangles), &flags);
}

Mesh build_unit_square_mesh(int n) {
  if (n < 2) throw InvalidArgumentError("square mesh needs n >= 2");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int c00 = vid(i, j), c10 = vid(i + 1, j);
      int c01 = vid(i, j + 1), c11 = vid(i + 1, j + 1);
      triangles.push_back({c00, c10, c11});
      triangles.push_back({c00, c11, c01});
    }
  }
  return Mesh::create(std::move(vertices), std::move(triangles));
}

Mesh build_unit_square_crisscross_mesh(int n) {
  if (n < 2) throw InvalidArgumentError("square mesh needs n >= 2");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1) +
                   static_cast<std::size_t>(n) * n);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int center = static_cast<int>(vertices.size());
      vertices.push_back(midpoint(vertices[vid(i, j)], vertices[vid(i + 1, j + 1)]));
      int v00 = vid(i, j), v10 = vid(i + 1, j);
      int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      triangles.push_back({v00, v10, center});
      triangles.push_back({v10, v11, center});
      triangles.push_back({v11, v01, center});
      triangles.push_back({v01, v00, center});
    }
  }
  return Mesh::create(std::move(vertices), std::move(triangles));
}

Mesh refine_uniform(const Mesh& mesh) {
  const int nv = mesh.nv();
  std::vector<Vec2> vertices = mesh.vertices;
  std::unordered_map<std::uint64_t, int> midpoint_id;
  midpoint_id.reserve(mesh.edge_count);
  auto mid = [&](int a, int b) {
    std::uint64_t key = edge_key(a, b, nv);
    auto it = midpoint_id.find(key);
    if (it != midpoint_id.end()) return it->second;
    int id = static_cast<int>(vertices.size());
    vertices.push_back(midpoint(mesh.vertices[a], mesh.vertices[b]));
    midpoint_id.emplace(key, id);
    return id;
  };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(mesh.triangles.size() * 4);
  for (const auto& tri : mesh.triangles) {
    int m01 = mid(tri[0], tri[1]);
    int m12 = mid(tri[1], tri[2]);
    int m20 = mid(tri[2], tri[0]);
    triangles.push_back({tri[0], m01, m20});
    triangles.push_back({m01, tri[1], m12});
    triangles.push_back({m20, m12, tri[2]});
    triangles.push_back({m01, m12, m20});
  }
  return Mesh::create(std::move(vertices), std::move(triangles));
}

namespace {

// One red-green round: red-split all marked triangles, then bisect
// triangles with exactly one split edge; triangles acquiring two or more
// split edges are promoted to red until the marking is stable.
Mesh refine_marked(const Mesh& mesh, std::vector<char> marked) {
  const int nv = mesh.nv();
  const int nt = mesh.nt();
  std::set<std::uint64_t> split_edges;
  auto mark_edges = [&](int t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      split_edges.insert(edge_key(tri[e], tri[(e + 1) % 3], nv));
    }
  };
  for (int t = 0; t < nt; ++t) {
    if (marked[t]) mark_edges(t);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      if (marked[t]) continue;
      const auto& tri = mesh.triangles[t];
      int split = 0;
      for (int e = 0; e < 3; ++e) {
        split += split_edges.count(edge_key(tri[e], tri[(e + 1) % 3], nv)) ? 1 : 0;
      }
      if (split >= 2) {
        marked[t] = 1;
        mark_edges(t);
        changed = true;
      }
    }
  }

  std::vector<Vec2> vertices = mesh.vertices;
  std::unordered_map<std::uint64_t, int> midpoint_id;
  auto mid = [&](int a, int b) {
    std::uint64_t key = edge_key(a, b, nv);
    auto it = midpoint_id.find(key);
    if (it != midpoint_id.end()) return it->second;
    int id = static_cast<int>(vertices.size());
    vertices.push_back(midpoint(mesh.vertices[a], mesh.vertices[b]));
    midpoint_id.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 3>> triangles;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    if (marked[t]) {
      int m01 = mid(tri[0], tri[1]);
      int m12 = mid(tri[1], tri[2]);
      int m20 = mid(tri[2], tri[0]);
      triangles.push_back({tri[0], m01, m20});
      triangles.push_back({m01, tri[1], m12});
      triangles.push_back({m20, m12, tri[2]});
      triangles.push_back({m01, m12, m20});
      continue;
    }
    int split_edge = -1;
    for (int e = 0; e < 3; ++e) {
      if (split_edges.count(edge_key(tri[e], tri[(e + 1) % 3], nv))) {
        split_edge = e;
        break;
      }
    }
    if (split_edge < 0) {
      triangles.push_back(tri);
    } else {
      int a = tri[split_edge], b = tri[(split_edge + 1) % 3];
      int c = tri[(split_edge + 2) % 3];
      int m = mid(a, b);
      triangles.push_back({a, m, c});
      triangles.push_back({m, b, c});
    }
  }
  return Mesh::create(std::move(vertices), std::move(triangles));
}

}  // namespace

Mesh refine_toward(const Mesh& mesh, Vec2 x0, int depth, double radius0) {
  if (depth < 0) throw InvalidArgumentError("grading depth must be >= 0");
  if (!(radius0 > 0.0)) throw InvalidArgumentError("grading radius must be positive");
  Mesh current = mesh;
  double radius = radius0;
  for (int d = 0; d < depth; ++d) {
    std::vector<char> marked(current.nt(), 0);
    int count = 0;
    for (int t = 0; t < current.nt(); ++t) {
      for (int v : current.triangles[t]) {
        if (dist(current.vertices[v], x0) <= radius) {
          marked[t] = 1;
          ++count;
          break;
        }
      }
    }
    if (count == 0) break;
    current = refine_marked(current, std::move(marked));
    radius *= 0.5;
  }
  return current;
}

SubmeshMap extract_submesh(const Mesh& mesh, const std::vector<int>& triangle_subset) {
  if (triangle_subset.empty()) throw InvalidArgumentError("empty triangle subset");
  std::vector<int> subset = triangle_subset;
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (int t : subset) {
    if (t < 0 || t >= mesh.nt()) throw InvalidArgumentError("triangle index out of range");
  }

  std::vector<int> child_id(mesh.nv(), -1);
  SubmeshMap map;
  map.parent_triangle_of = subset;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(subset.size());
  for (int t : subset) {
    std::array<int, 3> tri;
    for (int e = 0; e < 3; ++e) {
      int pv = mesh.triangles[t][e];
      if (child_id[pv] < 0) {
        child_id[pv] = static_cast<int>(vertices.size());
        vertices.push_back(mesh.vertices[pv]);
        map.parent_vertex_of.push_back(pv);
      }
      tri[e] = child_id[pv];
    }
    triangles.push_back(tri);
  }
  map.child = Mesh::create(std::move(vertices), std::move(triangles));
  return map;
}

std::vector<double> extend_by_zero(const std::vector<double>& sub_field,
                                   const SubmeshMap& map, const Mesh& parent) {
  const Mesh& child = map.child;
  if (static_cast<int>(sub_field.size()) != child.nv()) {
    throw InvalidArgumentError("field size does not match child vertex count");
  }
  double scale = 0.0;
  for (double v : sub_field) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int v = 0; v < child.nv(); ++v) {
    if (child.boundary[v] && std::abs(sub_field[v]) > tol) {
      throw PreconditionError("field does not vanish on the child boundary");
    }
  }
  std::vector<double> out(parent.nv(), 0.0);
  for (int v = 0; v < child.nv(); ++v) {
    out[map.parent_vertex_of[v]] = sub_field[v];
  }
  return out;
}

std::vector<double> restrict_to_child(const std::vector<double>& parent_field,
                                      const SubmeshMap& map) {
  std::vector<double> out(map.child.nv(), 0.0);
  for (int v = 0; v < map.child.nv(); ++v) {
    int pv = map.parent_vertex_of[v];
    if (pv < 0 || pv >= static_cast<int>(parent_field.size())) {
      throw InvalidArgumentError("parent field size does not match the map");
    }
    out[v] = parent_field[pv];
  }
  return out;
}

}  // namespace degeneig
