#pragma once

#include "edg/dgspace.hpp"
#include "edg/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>

namespace edg {

/// Lamé parameters of an isotropic material.
struct Lame {
  double mu = 0.0;
  double lambda = 0.0;
};

/// Plane-strain conversion from Young's modulus and Poisson's ratio.
Lame lame_from_engineering(double young, double poisson);

/// C A = 2 mu A + lambda tr(A) I.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> apply_elasticity_tensor(const Eigen::Matrix<Scalar, 2, 2>& a, Scalar mu, Scalar lambda) {
  return Scalar(2) * mu * a + lambda * a.trace() * Eigen::Matrix<Scalar, 2, 2>::Identity();
}

/// Coefficient of lambda in beta0; 3 is the three-dimensional value.
inline constexpr double kBeta0LambdaWeight = 3.0;

/// Penalty weights on one face: beta0 = w lambda + 2 mu, beta1 = 2 mu.
struct FaceWeights {
  double beta0 = 0.0;
  double beta1 = 0.0;
};

/// Per-element Lamé parameters. Faces between different materials use the
/// larger of the two sides' weights.
class MaterialField {
 public:
  struct Engineering {
    double young = 1.0;
    double poisson = 0.25;
  };

  static MaterialField uniform(const Mesh& mesh, double young, double poisson);
  /// Every triangle region must appear in `regions`.
  static MaterialField from_regions(const Mesh& mesh, const std::map<int, Engineering>& regions);

  const Lame& element(Index t) const { return lame_[static_cast<std::size_t>(t)]; }
  Index size() const { return static_cast<Index>(lame_.size()); }
  FaceWeights face_weights(const Mesh& mesh, Index face, double lambda_weight = kBeta0LambdaWeight) const;

  /// Every parameter multiplied by `factor`.
  MaterialField scaled(double factor) const;

 private:
  std::vector<Lame> lame_;
};

struct PenaltyParams {
  double alpha0 = 4.0;
  double alpha1 = 1.0;
  double beta0_lambda = kBeta0LambdaWeight;
  int theta = -1;  // -1 SIPG, 0 IIPG, 1 NIPG
};

/// Body force and Neumann traction. The traction receives the outward normal.
struct LoadSpec {
  std::function<Eigen::Vector2d(const Point&)> body_force;
  std::function<Eigen::Vector2d(const Point&, const Eigen::Vector2d&)> traction;
};

/// (C eps(u) : eps(w)) summed over elements.
SparseMatrix assemble_volume(const Mesh& mesh, const MaterialField& mat);

/// (grad u : grad w) summed over elements.
SparseMatrix assemble_gradient_volume(const Mesh& mesh);

/// Entry (w, u) is ({(C eps(u)) n}, [w]) over interior and Dirichlet faces.
SparseMatrix assemble_consistency(const Mesh& mesh, const MaterialField& mat);

/// alpha0 beta0 sum_E h_E^-1 int_E <[u], P0[w]>.
SparseMatrix assemble_penalty0(const Mesh& mesh, const MaterialField& mat, double alpha0,
                               double beta0_lambda = kBeta0LambdaWeight);

/// alpha1 beta1 sum_E h_E^-1 int_E <[u], [w]> with 2-point Gauss.
SparseMatrix assemble_penalty1(const Mesh& mesh, const MaterialField& mat, double alpha1);

/// The separate pieces of the IP forms, assembled once.
struct IPOperators {
  SparseMatrix volume;
  SparseMatrix consistency;
  SparseMatrix penalty0;
  SparseMatrix penalty1;

  /// volume - consistency + theta consistency^T + penalty0 + penalty1
  SparseMatrix ip1(int theta) const;
  /// volume - consistency - consistency^T + penalty0
  SparseMatrix ip0() const;
};

IPOperators assemble_operators(const Mesh& mesh, const MaterialField& mat, const PenaltyParams& pen);

/// IP-1 stiffness matrix. For the symmetric method with alpha0 >= 4 a few
/// deterministic probe vectors are checked and a negative Rayleigh quotient
/// raises CoercivityError.
SparseMatrix assemble_A(const Mesh& mesh, const MaterialField& mat, const PenaltyParams& pen);

/// IP-0 stiffness matrix (reduced integration of the jump penalty).
SparseMatrix assemble_A0(const Mesh& mesh, const MaterialField& mat, const PenaltyParams& pen);

/// Load vector: 3-point rule on elements, 2-point Gauss on Neumann faces.
/// Dirichlet data is homogeneous.
Vector assemble_rhs(const Mesh& mesh, const MaterialField& mat, const LoadSpec& load);

/// Scalar matrices over interior and Dirichlet faces (in SplitLayout Z
/// order): S(E',E'') = sum_E int_E h_E^-1 [psi_E'][psi_E''] and the diagonal
/// D(E,E) = |E| / h_E.
struct JumpGram {
  SparseMatrix S;
  Vector D;
};

JumpGram assemble_S_D(const Mesh& mesh);

/// Squared norms of a DG function.
struct DGNorms {
  double dg0 = 0.0;  // |C^1/2 eps|^2 + beta0 |P0[u]|_*^2
  double dg = 0.0;   // dg0 + beta1 |[u]|_*^2
  double h1 = 0.0;   // |grad u|^2 + beta0 |P0[u]|_*^2 + beta1 |[u]|_*^2
};

DGNorms dg_norms(const Vector& u, const Mesh& mesh, const MaterialField& mat);

}  // namespace edg
