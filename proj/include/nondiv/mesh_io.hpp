#pragma once

#include <iosfwd>
#include <string>

#include "nondiv/mesh.hpp"

namespace nondiv {

// Triangle-style .node/.ele text files with 1-based indices.
//   .node: "<#vertices> 2 0 1" then "<i> <x> <y> <boundary marker>"
//   .ele:  "<#triangles> 3 0"  then "<i> <v0> <v1> <v2>"

void write_node(std::ostream& os, const TriMesh& mesh);
void write_ele(std::ostream& os, const TriMesh& mesh);

/// Writes <basename>.node and <basename>.ele.
void write_triangle_files(const std::string& basename, const TriMesh& mesh);

TriMesh read_triangle(std::istream& node, std::istream& ele);
TriMesh read_triangle_files(const std::string& basename);

}  // namespace nondiv
