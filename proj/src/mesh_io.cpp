#include "nondiv/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nondiv {

namespace {

// Next non-empty line with '#' comments stripped.
bool next_record(std::istream& is, std::istringstream& line) {
  std::string text;
  while (std::getline(is, text)) {
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(text);
    return true;
  }
  return false;
}

}  // namespace

void write_node(std::ostream& os, const TriMesh& mesh) {
  os << mesh.num_vertices() << " 2 0 1\n";
  os << std::setprecision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& p = mesh.vertex(v);
    os << v + 1 << ' ' << p.x() << ' ' << p.y() << ' ' << (mesh.is_boundary_vertex(v) ? 1 : 0) << '\n';
  }
}

void write_ele(std::ostream& os, const TriMesh& mesh) {
  os << mesh.num_triangles() << " 3 0\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    os << t + 1 << ' ' << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
}

void write_triangle_files(const std::string& basename, const TriMesh& mesh) {
  std::ofstream node(basename + ".node");
  std::ofstream ele(basename + ".ele");
  if (!node || !ele) throw std::runtime_error("cannot open mesh output " + basename);
  write_node(node, mesh);
  write_ele(ele, mesh);
}

TriMesh read_triangle(std::istream& node, std::istream& ele) {
  std::istringstream line;
  if (!next_record(node, line)) throw std::runtime_error(".node: missing header");
  int nv = 0, dim = 0, nattr = 0, nmark = 0;
  line >> nv >> dim >> nattr >> nmark;
  if (!line || nv < 3 || dim != 2) throw std::runtime_error(".node: bad header");
  std::vector<Point2> vertices(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    if (!next_record(node, line)) throw std::runtime_error(".node: truncated");
    int id = 0;
    double x = 0, y = 0;
    line >> id >> x >> y;
    if (!line || id < 1 || id > nv) throw std::runtime_error(".node: bad vertex record");
    vertices[static_cast<std::size_t>(id - 1)] = Point2(x, y);
  }

  if (!next_record(ele, line)) throw std::runtime_error(".ele: missing header");
  int nt = 0, npt = 0;
  line >> nt >> npt;
  if (!line || nt < 1 || npt != 3) throw std::runtime_error(".ele: bad header");
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) {
    if (!next_record(ele, line)) throw std::runtime_error(".ele: truncated");
    int id = 0, a = 0, b = 0, c = 0;
    line >> id >> a >> b >> c;
    if (!line || id < 1 || id > nt) throw std::runtime_error(".ele: bad triangle record");
    triangles[static_cast<std::size_t>(id - 1)] = {a - 1, b - 1, c - 1};
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh read_triangle_files(const std::string& basename) {
  std::ifstream node(basename + ".node");
  std::ifstream ele(basename + ".ele");
  if (!node || !ele) throw std::runtime_error("cannot open mesh input " + basename);
  return read_triangle(node, ele);
}

}  // namespace nondiv
