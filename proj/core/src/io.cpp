#include "degeneig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "degeneig/errors.hpp"

namespace degeneig {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << "degenmesh 1\n" << mesh.nv() << ' ' << mesh.nt() << '\n';
  for (int v = 0; v < mesh.nv(); ++v) {
    os << fmt17(mesh.vertices[v].x) << ' ' << fmt17(mesh.vertices[v].y) << ' '
       << int(mesh.boundary[v]) << '\n';
  }
  for (const auto& tri : mesh.triangles) {
    os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_mesh(os, mesh);
  if (!os) throw IoError("write failed: " + path);
}

Mesh read_mesh(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "degenmesh" || version != 1) {
    throw IoError("not a degenmesh 1 stream");
  }
  int nv = 0, nt = 0;
  if (!(is >> nv >> nt) || nv < 3 || nt < 1) {
    throw IoError("bad mesh header counts");
  }
  std::vector<Vec2> vertices(nv);
  std::vector<std::uint8_t> flags(nv);
  for (int v = 0; v < nv; ++v) {
    double x, y;
    int b;
    if (!(is >> x >> y >> b) || (b != 0 && b != 1) || !std::isfinite(x) ||
        !std::isfinite(y)) {
      throw IoError("bad vertex line " + std::to_string(v));
    }
    vertices[v] = {x, y};
    flags[v] = static_cast<std::uint8_t>(b);
  }
  std::vector<std::array<int, 3>> triangles(nt);
  for (int t = 0; t < nt; ++t) {
    int i, j, k;
    if (!(is >> i >> j >> k)) throw IoError("bad triangle line " + std::to_string(t));
    triangles[t] = {i, j, k};
  }
  return Mesh::create_with_flags(std::move(vertices), std::move(triangles),
                                 std::move(flags));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifactError("cannot open mesh file: " + path);
  return read_mesh(is);
}

void write_field(std::ostream& os, const std::vector<double>& values) {
  os << "degenfield 1 " << values.size() << '\n';
  for (double v : values) os << fmt17(v) << '\n';
}

void write_field_file(const std::string& path, const std::vector<double>& values) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_field(os, values);
  if (!os) throw IoError("write failed: " + path);
}

std::vector<double> read_field(std::istream& is) {
  std::string magic;
  int version = 0;
  std::size_t count = 0;
  if (!(is >> magic >> version >> count) || magic != "degenfield" || version != 1) {
    throw IoError("not a degenfield 1 stream");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(is >> values[i]) || !std::isfinite(values[i])) {
      throw IoError("bad field value at index " + std::to_string(i));
    }
  }
  return values;
}

std::vector<double> read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifactError("cannot open field file: " + path);
  return read_field(is);
}

}  // namespace degeneig
