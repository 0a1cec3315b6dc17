#include "edg/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace edg {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void parse_error(const std::string& what) { throw std::runtime_error("mesh file: " + what); }

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const Index boundary = mesh.num_faces() - mesh.count(FaceKind::Interior);
  out << "vertices " << mesh.num_vertices() << " faces " << boundary << " triangles " << mesh.num_triangles() << '\n';
  for (const auto& p : mesh.vertices()) out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
  for (const auto& t : mesh.triangles())
    out << "t " << t.vertices[0] << ' ' << t.vertices[1] << ' ' << t.vertices[2] << ' ' << t.region << '\n';
  for (const auto& f : mesh.faces()) {
    if (f.interior()) continue;
    out << "b " << f.vertices[0] << ' ' << f.vertices[1] << ' ' << to_string(f.kind) << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error("missing header");
  std::istringstream header(line);
  std::string w1, w2, w3;
  long long nv = -1, nb = -1, nt = -1;
  if (!(header >> w1 >> nv >> w2 >> nb >> w3 >> nt) || w1 != "vertices" || w2 != "faces" || w3 != "triangles" || nv < 0 ||
      nb < 0 || nt < 0) {
    parse_error("bad header '" + line + "'");
  }
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<std::pair<std::array<Index, 2>, FaceKind>> tags;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rec(line);
    std::string tag;
    rec >> tag;
    if (tag == "v") {
      std::string xs, ys;
      if (!(rec >> xs >> ys)) parse_error("bad vertex record '" + line + "'");
      vertices.emplace_back(std::strtod(xs.c_str(), nullptr), std::strtod(ys.c_str(), nullptr));
    } else if (tag == "t") {
      Triangle t;
      if (!(rec >> t.vertices[0] >> t.vertices[1] >> t.vertices[2] >> t.region)) parse_error("bad triangle record '" + line + "'");
      triangles.push_back(t);
    } else if (tag == "b") {
      Index i = 0, j = 0;
      std::string kind;
      if (!(rec >> i >> j >> kind)) parse_error("bad boundary record '" + line + "'");
      tags.push_back({{i, j}, face_kind_from_string(kind)});
    } else {
      parse_error("unknown record '" + line + "'");
    }
  }
  if (static_cast<long long>(vertices.size()) != nv || static_cast<long long>(triangles.size()) != nt ||
      static_cast<long long>(tags.size()) != nb) {
    parse_error("record counts do not match the header");
  }
  return Mesh::from_triangles(std::move(vertices), std::move(triangles), tags);
}

void save_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_mesh(out, mesh);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace edg
