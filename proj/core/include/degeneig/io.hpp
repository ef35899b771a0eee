#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degeneig/mesh.hpp"

namespace degeneig {

// %.17g rendering; round-trips any double exactly.
std::string fmt17(double v);

// Mesh text format:
//   degenmesh 1
//   <nv> <nt>
//   nv lines: x y b      (b in {0,1})
//   nt lines: i j k      (0-based, counterclockwise)
// The writer emits coordinates with fmt17, so write/read round-trips are
// bit-exact.
void write_mesh(std::ostream& os, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh(std::istream& is);
Mesh read_mesh_file(const std::string& path);

// Vertex field format:
//   degenfield 1 <nv>
//   nv lines: value
void write_field(std::ostream& os, const std::vector<double>& values);
void write_field_file(const std::string& path, const std::vector<double>& values);
std::vector<double> read_field(std::istream& is);
std::vector<double> read_field_file(const std::string& path);

}  // namespace degeneig
