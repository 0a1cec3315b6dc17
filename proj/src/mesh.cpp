#include "edg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace edg {

namespace {

using EdgeKey = std::array<Index, 2>;

EdgeKey edge_key(Index a, Index b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

struct Side {
  Index element;
  int local;
};

}  // namespace

std::string to_string(FaceKind kind) {
  switch (kind) {
    case FaceKind::Interior:
      return "interior";
    case FaceKind::Dirichlet:
      return "dirichlet";
    case FaceKind::Neumann:
      return "neumann";
  }
  return "unknown";
}

FaceKind face_kind_from_string(const std::string& name) {
  if (name == "interior") return FaceKind::Interior;
  if (name == "dirichlet") return FaceKind::Dirichlet;
  if (name == "neumann") return FaceKind::Neumann;
  throw std::invalid_argument("unknown face kind '" + name + "'");
}

Mesh Mesh::from_triangles(std::vector<Point> vertices, std::vector<Triangle> triangles,
                          const std::vector<std::pair<std::array<Index, 2>, FaceKind>>& boundary_kinds,
                          int level) {
  Mesh mesh;
  mesh.level_ = level;
  const auto nv = static_cast<Index>(vertices.size());
  for (const auto& p : vertices) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw std::invalid_argument("non-finite vertex coordinate");
  }
  for (auto& t : triangles) {
    for (Index v : t.vertices) {
      if (v < 0 || v >= nv) throw std::invalid_argument("triangle references a missing vertex");
    }
    if (t.vertices[0] == t.vertices[1] || t.vertices[1] == t.vertices[2] || t.vertices[0] == t.vertices[2]) {
      throw std::invalid_argument("triangle with repeated vertex ids");
    }
    const auto& p = vertices;
    double a = signed_area(p[static_cast<std::size_t>(t.vertices[0])], p[static_cast<std::size_t>(t.vertices[1])],
                           p[static_cast<std::size_t>(t.vertices[2])]);
    if (a == 0.0) throw std::invalid_argument("degenerate triangle");
    if (a < 0.0) std::swap(t.vertices[1], t.vertices[2]);
  }
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);

  std::map<EdgeKey, std::vector<Side>> edges;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tv = mesh.triangles_[static_cast<std::size_t>(t)].vertices;
    for (int i = 0; i < 3; ++i) {
      edges[edge_key(tv[static_cast<std::size_t>((i + 1) % 3)], tv[static_cast<std::size_t>((i + 2) % 3)])].push_back({t, i});
    }
  }
  std::map<EdgeKey, FaceKind> tags;
  for (const auto& [key, kind] : boundary_kinds) tags[edge_key(key[0], key[1])] = kind;

  mesh.element_faces_.assign(mesh.triangles_.size(), {-1, -1, -1});
  mesh.faces_.reserve(edges.size());
  for (const auto& [key, sides] : edges) {
    if (sides.size() > 2) throw std::invalid_argument("non-manifold edge shared by more than two triangles");
    Face f;
    f.vertices = key;
    const Point& a = mesh.vertex(key[0]);
    const Point& b = mesh.vertex(key[1]);
    f.diameter = (b - a).norm();
    f.midpoint = 0.5 * (a + b);
    // Sides are collected in increasing element id, so sides[0] is the lower id.
    f.t_plus = sides[0].element;
    f.local_plus = sides[0].local;
    f.normal = mesh.outward_normal(f.t_plus, f.local_plus);
    if (sides.size() == 2) {
      f.t_minus = sides[1].element;
      f.local_minus = sides[1].local;
      f.kind = FaceKind::Interior;
    } else {
      auto it = tags.find(key);
      f.kind = it == tags.end() ? FaceKind::Dirichlet : it->second;
      if (f.kind == FaceKind::Interior) throw std::invalid_argument("boundary edge tagged as interior");
    }
    const auto id = static_cast<Index>(mesh.faces_.size());
    for (const auto& s : sides) mesh.element_faces_[static_cast<std::size_t>(s.element)][static_cast<std::size_t>(s.local)] = id;
    mesh.faces_.push_back(f);
  }
  return mesh;
}

double Mesh::area(Index t) const {
  const auto& v = triangle(t).vertices;
  return signed_area(vertex(v[0]), vertex(v[1]), vertex(v[2]));
}

Point Mesh::outward_normal(Index t, int i) const {
  const auto& v = triangle(t).vertices;
  const Point& a = vertex(v[static_cast<std::size_t>((i + 1) % 3)]);
  const Point& b = vertex(v[static_cast<std::size_t>((i + 2) % 3)]);
  // Counterclockwise orientation puts the interior on the left of a->b.
  Point d = b - a;
  return Point(d.y(), -d.x()).normalized();
}

Index Mesh::count(FaceKind kind) const {
  return static_cast<Index>(std::count_if(faces_.begin(), faces_.end(), [kind](const Face& f) { return f.kind == kind; }));
}

Mesh unit_square_coarse() {
  std::vector<Point> p;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) p.emplace_back(0.5 * i, 0.5 * j);
  std::vector<Triangle> t;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const Index ll = j * 3 + i, lr = ll + 1, ul = ll + 3, ur = ll + 4;
      t.push_back({{ll, lr, ur}, 0});
      t.push_back({{ll, ur, ul}, 0});
    }
  }
  return Mesh::from_triangles(std::move(p), std::move(t));
}

Mesh lshape_coarse() {
  std::vector<Point> p{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}};
  std::vector<Triangle> t{{{0, 1, 3}, 0}, {{1, 2, 3}, 0}, {{0, 3, 5}, 0}, {{3, 4, 5}, 0}};
  return Mesh::from_triangles(std::move(p), std::move(t));
}

Mesh refine(const Mesh& mesh) {
  std::vector<Point> p = mesh.vertices();
  const Index nv = mesh.num_vertices();
  for (const auto& f : mesh.faces()) p.push_back(f.midpoint);

  std::vector<Triangle> children;
  children.reserve(static_cast<std::size_t>(4 * mesh.num_triangles()));
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Index a = tri.vertices[0], b = tri.vertices[1], c = tri.vertices[2];
    // m_i is the midpoint of the edge opposite vertex i.
    const Index ma = nv + mesh.element_face(t, 0);
    const Index mb = nv + mesh.element_face(t, 1);
    const Index mc = nv + mesh.element_face(t, 2);
    children.push_back({{a, mc, mb}, tri.region});
    children.push_back({{mc, b, ma}, tri.region});
    children.push_back({{mb, ma, c}, tri.region});
    children.push_back({{ma, mb, mc}, tri.region});
  }

  std::vector<std::pair<std::array<Index, 2>, FaceKind>> tags;
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const auto& face = mesh.face(f);
    if (face.interior()) continue;
    tags.push_back({{face.vertices[0], nv + f}, face.kind});
    tags.push_back({{nv + f, face.vertices[1]}, face.kind});
  }
  return Mesh::from_triangles(std::move(p), std::move(children), tags, mesh.level() + 1);
}

Mesh refine(const Mesh& mesh, int times) {
  Mesh m = mesh;
  for (int i = 0; i < times; ++i) m = refine(m);
  return m;
}

Mesh classify_boundary(const Mesh& mesh, const BoundaryPredicate& neumann) {
  std::vector<std::pair<std::array<Index, 2>, FaceKind>> tags;
  for (const auto& f : mesh.faces()) {
    if (f.interior()) continue;
    tags.push_back({f.vertices, neumann && neumann(f.midpoint) ? FaceKind::Neumann : FaceKind::Dirichlet});
  }
  return Mesh::from_triangles(mesh.vertices(), mesh.triangles(), tags, mesh.level());
}

Mesh assign_regions(const Mesh& mesh, const std::function<int(const Point&)>& region_of) {
  std::vector<Triangle> tris = mesh.triangles();
  for (auto& t : tris)
    t.region = region_of((mesh.vertex(t.vertices[0]) + mesh.vertex(t.vertices[1]) + mesh.vertex(t.vertices[2])) / 3.0);
  std::vector<std::pair<std::array<Index, 2>, FaceKind>> tags;
  for (const auto& f : mesh.faces())
    if (!f.interior()) tags.push_back({f.vertices, f.kind});
  return Mesh::from_triangles(mesh.vertices(), std::move(tris), tags, mesh.level());
}

BoundaryPredicate sides_predicate(const std::vector<std::string>& sides) {
  struct Side {
    int axis;
    double value;
  };
  std::vector<Side> parsed;
  bool all = false;
  for (const auto& s : sides) {
    if (s == "all") {
      all = true;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || (s[0] != 'x' && s[0] != 'y')) {
      throw std::invalid_argument("boundary side must look like 'x=0' or 'y=1', got '" + s + "'");
    }
    std::size_t used = 0;
    const std::string rhs = s.substr(eq + 1);
    double value = 0.0;
    try {
      value = std::stod(rhs, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rhs.size()) throw std::invalid_argument("bad coordinate in boundary side '" + s + "'");
    parsed.push_back({s[0] == 'x' ? 0 : 1, value});
  }
  return [parsed, all](const Point& m) {
    if (all) return true;
    return std::any_of(parsed.begin(), parsed.end(), [&m](const Side& s) { return std::abs(m[s.axis] - s.value) <= 1e-12; });
  };
}

std::vector<Index> neighbor_set(const Mesh& mesh, Index face, int order) {
  if (face < 0 || face >= mesh.num_faces()) throw std::out_of_range("face id out of range");
  const auto elements_of = [&mesh](Index f) {
    const auto& fc = mesh.face(f);
    std::vector<Index> out{fc.t_plus};
    if (fc.t_minus) out.push_back(*fc.t_minus);
    return out;
  };
  const auto n1 = [&](Index f) {
    std::set<Index> out;
    for (Index t : elements_of(f))
      for (int i = 0; i < 3; ++i) out.insert(mesh.element_face(t, i));
    return out;
  };
  switch (order) {
    case 0: {
      auto e = elements_of(face);
      std::sort(e.begin(), e.end());
      return e;
    }
    case 1: {
      auto s = n1(face);
      return {s.begin(), s.end()};
    }
    case 2: {
      // N1 is symmetric, so N2(E) is the union of N1(E') over E' in N1(E).
      std::set<Index> out;
      for (Index g : n1(face)) {
        auto s = n1(g);
        out.insert(s.begin(), s.end());
      }
      return {out.begin(), out.end()};
    }
    default:
      throw std::invalid_argument("neighbor order must be 0, 1 or 2");
  }
}

double shape_regularity(const Mesh& mesh) {
  double worst = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t).vertices;
    const double a = (mesh.vertex(v[1]) - mesh.vertex(v[2])).norm();
    const double b = (mesh.vertex(v[2]) - mesh.vertex(v[0])).norm();
    const double c = (mesh.vertex(v[0]) - mesh.vertex(v[1])).norm();
    const double area = std::abs(mesh.area(t));
    if (!(area > 1e-14 * (a * a + b * b + c * c))) {
      std::ostringstream msg;
      msg << "degenerate triangle " << t;
      throw std::domain_error(msg.str());
    }
    const double circumradius = a * b * c / (4.0 * area);
    const double inradius = area / (0.5 * (a + b + c));
    worst = std::max(worst, circumradius / inradius);
  }
  return worst;
}

}  // namespace edg
