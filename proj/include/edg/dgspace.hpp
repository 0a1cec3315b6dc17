#pragma once

#include "edg/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace edg {

/// Maps (element, local face, component) to a global coefficient index of
/// the piecewise linear vector DG space in the face-midpoint nodal basis.
/// Components are interleaved per midpoint; each element owns a contiguous
/// block of 6 entries.
class DofMap {
 public:
  explicit DofMap(Index num_elements) : num_elements_(num_elements) {}

  Index operator()(Index element, int local_face, int component) const { return 6 * element + 2 * local_face + component; }
  Index dim() const { return 6 * num_elements_; }
  Index num_elements() const { return num_elements_; }

 private:
  Index num_elements_;
};

DofMap build_dofmap(const Mesh& mesh);

/// Values of the three local nodal functions of element `t` at `x`. Function
/// `i` is 1 at the midpoint of local face `i` and 0 at the other two.
Eigen::Vector3d nodal_shape_values(const Mesh& mesh, Index t, const Point& x);

/// Gradients (as columns) of the three local nodal functions of `t`.
Eigen::Matrix<double, 2, 3> nodal_shape_gradients(const Mesh& mesh, Index t);

/// 2x6 map from the element's local coefficients to the vector value at `x`.
Eigen::Matrix<double, 2, 6> trace_operator(const Mesh& mesh, Index t, const Point& x);

/// Value at `x` of `u` restricted to element `t`.
Eigen::Vector2d evaluate(const Mesh& mesh, const Vector& u, Index t, const Point& x);

enum class Trace { Plus, Minus, Jump, Average };

/// P0_E of the requested trace; for DG linears this is the trace at m_E.
/// On boundary faces jump and average both equal the plus trace.
Eigen::Vector2d midpoint_project(const Mesh& mesh, const Vector& u, Index face, Trace which);

/// Trace at an arbitrary point of the face.
Eigen::Vector2d trace_at(const Mesh& mesh, const Vector& u, Index face, const Point& x, Trace which);

/// Index sets of the CR ⊕ Z basis. Z slots come from interior and Dirichlet
/// faces, CR slots from interior and Neumann faces, both in face order with
/// interleaved components. The split coordinate vector stores Z first.
class SplitLayout {
 public:
  explicit SplitLayout(const Mesh& mesh);

  Index nz() const { return 2 * static_cast<Index>(z_faces_.size()); }
  Index nv() const { return 2 * static_cast<Index>(v_faces_.size()); }
  Index dim() const { return nz() + nv(); }

  const std::vector<Index>& z_faces() const { return z_faces_; }
  const std::vector<Index>& v_faces() const { return v_faces_; }
  /// Slot of the face in the Z (resp. CR) list, or -1.
  Index z_slot(Index face) const { return z_slot_[static_cast<std::size_t>(face)]; }
  Index v_slot(Index face) const { return v_slot_[static_cast<std::size_t>(face)]; }

 private:
  std::vector<Index> z_faces_, v_faces_;
  std::vector<Index> z_slot_, v_slot_;
};

struct SplitVector {
  Vector z;  // coefficients of psi^z_E e_k
  Vector v;  // coefficients of phi^CR_E e_k

  Vector stacked() const;
  static SplitVector unstack(const Vector& s, Index nz);
};

/// Face means of the average (CR part) and of the jump (Z part).
SplitVector split(const Mesh& mesh, const SplitLayout& layout, const Vector& u);

/// Nodal coefficients of sum v_E phi^CR_E + sum z_E psi^z_E.
Vector recombine(const Mesh& mesh, const SplitLayout& layout, const SplitVector& s);

/// Q with recombine(s) = Q * s.stacked(). Columns hold at most two entries
/// from {1, 1/2, -1/2}.
SparseMatrix basis_change_matrix(const Mesh& mesh, const SplitLayout& layout);

/// Diagonal of the Z-coordinate change from psi^z_E to the unhalved
/// nodal differences phi+ - phi-: 2 on interior faces, 1 on Dirichlet faces.
Vector z_nodal_scaling(const Mesh& mesh, const SplitLayout& layout);

/// |a+ (.) b+ - a- (.) b- - ([a] (.) {b} + {a} (.) [b])| for any bilinear
/// product `op`; the norm is the Frobenius norm for matrix results.
template <typename A, typename B, typename Op>
double product_identity_residual(const A& a_plus, const A& a_minus, const B& b_plus, const B& b_minus, Op op) {
  const A ja = a_plus - a_minus;
  const A aa = 0.5 * (a_plus + a_minus);
  const B jb = b_plus - b_minus;
  const B ab = 0.5 * (b_plus + b_minus);
  const auto lhs = op(a_plus, b_plus) - op(a_minus, b_minus);
  const auto rhs = op(ja, ab) + op(aa, jb);
  if constexpr (std::is_arithmetic_v<std::decay_t<decltype(lhs)>>) {
    return std::abs(lhs - rhs);
  } else {
    return (lhs - rhs).norm();
  }
}

}  // namespace edg
