#pragma once

#include "edg/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace edg {

enum class FaceKind { Interior, Dirichlet, Neumann };

std::string to_string(FaceKind kind);
FaceKind face_kind_from_string(const std::string& name);

struct Triangle {
  std::array<Index, 3> vertices;  // counterclockwise
  int region = 0;
};

/// An edge of the triangulation.
///
/// `t_plus` is the element whose outward normal agrees with `normal`;
/// `t_minus` is the opposite element on interior faces. Local face `i` of a
/// triangle is the edge opposite its vertex `i`.
struct Face {
  std::array<Index, 2> vertices;
  Point normal;
  Index t_plus = -1;
  std::optional<Index> t_minus;
  int local_plus = -1;
  int local_minus = -1;
  FaceKind kind = FaceKind::Dirichlet;
  double diameter = 0.0;  // h_E, equal to the length in 2D
  Point midpoint;

  bool interior() const { return kind == FaceKind::Interior; }
  double measure() const { return diameter; }
};

/// Conforming triangulation with oriented faces. Immutable once built.
class Mesh {
 public:
  /// Builds faces and incidence from raw connectivity. Boundary faces are
  /// Dirichlet unless listed in `boundary_kinds` (keyed by vertex pair).
  static Mesh from_triangles(std::vector<Point> vertices, std::vector<Triangle> triangles,
                             const std::vector<std::pair<std::array<Index, 2>, FaceKind>>& boundary_kinds = {},
                             int level = 0);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(Index f) const { return faces_[static_cast<std::size_t>(f)]; }
  const Triangle& triangle(Index t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const Point& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }
  int level() const { return level_; }

  /// Global face id of local face `i` (opposite vertex `i`) of element `t`.
  Index element_face(Index t, int i) const { return element_faces_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]; }

  double area(Index t) const;
  /// Outward unit normal of local face `i` of element `t`.
  Point outward_normal(Index t, int i) const;

  Index count(FaceKind kind) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Face> faces_;
  std::vector<std::array<Index, 3>> element_faces_;
  int level_ = 0;
};

/// (0,1)^2 split into 2x2 squares, each cut along its lower-left to
/// upper-right diagonal: 8 triangles.
Mesh unit_square_coarse();

/// [0,1]^2 minus (0.5,1]x(0.5,1] as 4 right isosceles triangles.
Mesh lshape_coarse();

/// Red refinement: every triangle becomes 4 congruent children.
Mesh refine(const Mesh& mesh);

Mesh refine(const Mesh& mesh, int times);

using BoundaryPredicate = std::function<bool(const Point&)>;

/// Tags each boundary face Neumann iff the predicate holds at its midpoint,
/// Dirichlet otherwise.
Mesh classify_boundary(const Mesh& mesh, const BoundaryPredicate& neumann);

/// Sets each triangle's region from its centroid. Boundary tags are kept.
Mesh assign_regions(const Mesh& mesh, const std::function<int(const Point&)>& region_of);

/// Predicate matching the sides "x=0", "y=1", ... of an axis-aligned domain.
/// "all" matches every boundary face, an empty list matches none.
BoundaryPredicate sides_predicate(const std::vector<std::string>& sides);

/// N0 (elements containing the face), N1 (faces sharing an element with it)
/// or N2 (faces sharing a member of N1). Sorted ids.
std::vector<Index> neighbor_set(const Mesh& mesh, Index face, int order);

/// max over elements of circumradius / inradius.
double shape_regularity(const Mesh& mesh);

}  // namespace edg
