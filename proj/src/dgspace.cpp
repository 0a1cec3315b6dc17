#include "edg/dgspace.hpp"

namespace edg {

DofMap build_dofmap(const Mesh& mesh) { return DofMap(mesh.num_triangles()); }

namespace {

// Barycentric coordinates of x in triangle t.
Eigen::Vector3d barycentric(const Mesh& mesh, Index t, const Point& x) {
  const auto& v = mesh.triangle(t).vertices;
  const Point& a = mesh.vertex(v[0]);
  Eigen::Matrix2d jac;
  jac.col(0) = mesh.vertex(v[1]) - a;
  jac.col(1) = mesh.vertex(v[2]) - a;
  const Eigen::Vector2d st = jac.partialPivLu().solve(x - a);
  return {1.0 - st.x() - st.y(), st.x(), st.y()};
}

}  // namespace

Eigen::Vector3d nodal_shape_values(const Mesh& mesh, Index t, const Point& x) {
  // The nodal function of local face i is 1 - 2 lambda_i.
  return Eigen::Vector3d::Ones() - 2.0 * barycentric(mesh, t, x);
}

Eigen::Matrix<double, 2, 3> nodal_shape_gradients(const Mesh& mesh, Index t) {
  const auto& v = mesh.triangle(t).vertices;
  const double twice_area = 2.0 * mesh.area(t);
  Eigen::Matrix<double, 2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Point& b = mesh.vertex(v[static_cast<std::size_t>((i + 1) % 3)]);
    const Point& c = mesh.vertex(v[static_cast<std::size_t>((i + 2) % 3)]);
    // grad lambda_i = rot(c - b) / (2|T|)
    const Eigen::Vector2d grad_lambda(b.y() - c.y(), c.x() - b.x());
    g.col(i) = -2.0 * grad_lambda / twice_area;
  }
  return g;
}

Eigen::Matrix<double, 2, 6> trace_operator(const Mesh& mesh, Index t, const Point& x) {
  const Eigen::Vector3d phi = nodal_shape_values(mesh, t, x);
  Eigen::Matrix<double, 2, 6> op = Eigen::Matrix<double, 2, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    op(0, 2 * i) = phi[i];
    op(1, 2 * i + 1) = phi[i];
  }
  return op;
}

Eigen::Vector2d evaluate(const Mesh& mesh, const Vector& u, Index t, const Point& x) {
  return trace_operator(mesh, t, x) * u.segment<6>(6 * t);
}

Eigen::Vector2d trace_at(const Mesh& mesh, const Vector& u, Index face, const Point& x, Trace which) {
  const Face& f = mesh.face(face);
  const Eigen::Vector2d plus = evaluate(mesh, u, f.t_plus, x);
  if (!f.t_minus) {
    if (which == Trace::Minus) throw std::invalid_argument("boundary face has no minus trace");
    return plus;
  }
  const Eigen::Vector2d minus = evaluate(mesh, u, *f.t_minus, x);
  switch (which) {
    case Trace::Plus:
      return plus;
    case Trace::Minus:
      return minus;
    case Trace::Jump:
      return plus - minus;
    case Trace::Average:
      return 0.5 * (plus + minus);
  }
  return plus;
}

Eigen::Vector2d midpoint_project(const Mesh& mesh, const Vector& u, Index face, Trace which) {
  const Face& f = mesh.face(face);
  if (!f.t_minus && which == Trace::Minus) throw std::invalid_argument("boundary face has no minus trace");
  // The nodal coefficients are exactly the midpoint values.
  const Eigen::Vector2d plus = u.segment<2>(6 * f.t_plus + 2 * f.local_plus);
  if (!f.t_minus) return plus;
  const Eigen::Vector2d minus = u.segment<2>(6 * *f.t_minus + 2 * f.local_minus);
  switch (which) {
    case Trace::Plus:
      return plus;
    case Trace::Minus:
      return minus;
    case Trace::Jump:
      return plus - minus;
    case Trace::Average:
      return 0.5 * (plus + minus);
  }
  return plus;
}

SplitLayout::SplitLayout(const Mesh& mesh)
    : z_slot_(static_cast<std::size_t>(mesh.num_faces()), -1), v_slot_(static_cast<std::size_t>(mesh.num_faces()), -1) {
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const FaceKind k = mesh.face(f).kind;
    if (k != FaceKind::Neumann) {
      z_slot_[static_cast<std::size_t>(f)] = static_cast<Index>(z_faces_.size());
      z_faces_.push_back(f);
    }
    if (k != FaceKind::Dirichlet) {
      v_slot_[static_cast<std::size_t>(f)] = static_cast<Index>(v_faces_.size());
      v_faces_.push_back(f);
    }
  }
}

Vector SplitVector::stacked() const {
  Vector s(z.size() + v.size());
  s << z, v;
  return s;
}

SplitVector SplitVector::unstack(const Vector& s, Index nz) { return {s.head(nz), s.tail(s.size() - nz)}; }

SplitVector split(const Mesh& mesh, const SplitLayout& layout, const Vector& u) {
  if (u.size() != 6 * mesh.num_triangles()) throw std::invalid_argument("split: vector does not match the mesh");
  SplitVector s{Vector::Zero(layout.nz()), Vector::Zero(layout.nv())};
  for (std::size_t i = 0; i < layout.z_faces().size(); ++i)
    s.z.segment<2>(2 * static_cast<Index>(i)) = midpoint_project(mesh, u, layout.z_faces()[i], Trace::Jump);
  for (std::size_t i = 0; i < layout.v_faces().size(); ++i)
    s.v.segment<2>(2 * static_cast<Index>(i)) = midpoint_project(mesh, u, layout.v_faces()[i], Trace::Average);
  return s;
}

Vector recombine(const Mesh& mesh, const SplitLayout& layout, const SplitVector& s) {
  if (s.z.size() != layout.nz() || s.v.size() != layout.nv()) throw std::invalid_argument("recombine: split vector does not match the mesh");
  Vector u = Vector::Zero(6 * mesh.num_triangles());
  for (std::size_t i = 0; i < layout.z_faces().size(); ++i) {
    const Face& f = mesh.face(layout.z_faces()[i]);
    const Eigen::Vector2d c = s.z.segment<2>(2 * static_cast<Index>(i));
    if (f.t_minus) {
      u.segment<2>(6 * f.t_plus + 2 * f.local_plus) += 0.5 * c;
      u.segment<2>(6 * *f.t_minus + 2 * f.local_minus) -= 0.5 * c;
    } else {
      u.segment<2>(6 * f.t_plus + 2 * f.local_plus) += c;
    }
  }
  for (std::size_t i = 0; i < layout.v_faces().size(); ++i) {
    const Face& f = mesh.face(layout.v_faces()[i]);
    const Eigen::Vector2d c = s.v.segment<2>(2 * static_cast<Index>(i));
    u.segment<2>(6 * f.t_plus + 2 * f.local_plus) += c;
    if (f.t_minus) u.segment<2>(6 * *f.t_minus + 2 * f.local_minus) += c;
  }
  return u;
}

SparseMatrix basis_change_matrix(const Mesh& mesh, const SplitLayout& layout) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(2 * layout.dim()));
  for (std::size_t i = 0; i < layout.z_faces().size(); ++i) {
    const Face& f = mesh.face(layout.z_faces()[i]);
    for (int k = 0; k < 2; ++k) {
      const Index col = 2 * static_cast<Index>(i) + k;
      if (f.t_minus) {
        trip.emplace_back(6 * f.t_plus + 2 * f.local_plus + k, col, 0.5);
        trip.emplace_back(6 * *f.t_minus + 2 * f.local_minus + k, col, -0.5);
      } else {
        trip.emplace_back(6 * f.t_plus + 2 * f.local_plus + k, col, 1.0);
      }
    }
  }
  for (std::size_t i = 0; i < layout.v_faces().size(); ++i) {
    const Face& f = mesh.face(layout.v_faces()[i]);
    for (int k = 0; k < 2; ++k) {
      const Index col = layout.nz() + 2 * static_cast<Index>(i) + k;
      trip.emplace_back(6 * f.t_plus + 2 * f.local_plus + k, col, 1.0);
      if (f.t_minus) trip.emplace_back(6 * *f.t_minus + 2 * f.local_minus + k, col, 1.0);
    }
  }
  SparseMatrix q(6 * mesh.num_triangles(), layout.dim());
  q.setFromTriplets(trip.begin(), trip.end());
  return q;
}

Vector z_nodal_scaling(const Mesh& mesh, const SplitLayout& layout) {
  Vector s(layout.nz());
  for (Index i = 0; i < layout.nz(); ++i)
    s[i] = mesh.face(layout.z_faces()[static_cast<std::size_t>(i / 2)]).interior() ? 2.0 : 1.0;
  return s;
}

}  // namespace edg
