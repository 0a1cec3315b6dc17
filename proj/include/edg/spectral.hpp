#pragma once

#include "edg/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace edg {

using LinearOperator = std::function<Vector(const Vector&)>;

inline LinearOperator as_operator(const SparseMatrix& a) {
  return [&a](const Vector& x) -> Vector { return a * x; };
}

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  Vector x;
  SolveReport report;
  /// Relative residual after every iteration (entry 0 is the initial one).
  std::vector<double> history;
};

/// Conjugate gradients from a zero initial guess. Stops when
/// |b - A x| <= tol |b|. Throws ConvergenceError on NaN or breakdown.
SolveResult cg(const LinearOperator& a, const Vector& b, double tol, int maxit);
SolveResult cg(const SparseMatrix& a, const Vector& b, double tol, int maxit);

/// Preconditioned CG; `precond` applies B^-1.
SolveResult pcg(const LinearOperator& a, const LinearOperator& precond, const Vector& b, double tol, int maxit);

/// Sparse LDL^T factorization of a symmetric positive (semi)definite matrix.
///
/// Pivots with |d| <= pivot_tol * max|diag(A)| count as null pivots. With
/// `allow_singular` they are dropped, the kernel is recovered from the
/// factor, and solve() returns the minimum-norm-like solution orthogonal to
/// it; otherwise construction throws SingularMatrixError.
class SymmetricFactorization {
 public:
  static constexpr double kPivotTolerance = 5e-9;

  explicit SymmetricFactorization(const SparseMatrix& a, bool allow_singular = false, double pivot_tol = kPivotTolerance);

  Index rows() const { return n_; }
  Index null_dim() const { return static_cast<Index>(null_pivots_.size()); }
  /// Orthonormal basis of the detected kernel (columns).
  const Eigen::MatrixXd& kernel() const { return kernel_; }

  Vector solve(const Vector& b) const;

 private:
  Index n_ = 0;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  std::vector<Index> null_pivots_;
  Vector inv_pivots_;
  Eigen::MatrixXd kernel_;
};

inline SymmetricFactorization direct_factorize(const SparseMatrix& a, bool allow_singular = false) {
  return SymmetricFactorization(a, allow_singular);
}

inline Vector direct_solve(const SymmetricFactorization& f, const Vector& b) { return f.solve(b); }

struct EigenExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int iterations = 0;

  double condition() const { return lambda_max / lambda_min; }
};

enum class Extremes { Both, Largest, Smallest };

struct LanczosOptions {
  int max_iterations = 1500;
  double tolerance = 1e-10;  // residual bound relative to max |Ritz value|
  std::uint64_t seed = 0x5eed;
  Extremes which = Extremes::Both;
  /// Vectors spanning a common kernel of A and M; iterates are kept
  /// orthogonal to them.
  std::vector<Vector> deflate;
};

/// Extreme eigenvalues of A x = lambda M x by Lanczos in the M inner product
/// with full reorthogonalization. `apply_m`/`solve_m` may be empty for M = I.
EigenExtremes lanczos_extremes(Index n, const LinearOperator& apply_a, const LinearOperator& apply_m,
                               const LinearOperator& solve_m, const LanczosOptions& opt = {});

/// Sparse convenience form; M is factorized when given.
EigenExtremes sym_eig_extremes(const SparseMatrix& a, const SparseMatrix* m = nullptr, const LanczosOptions& opt = {});

/// Dense reference path: full generalized symmetric eigendecomposition.
EigenExtremes sym_eig_extremes_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd* m = nullptr);

/// All eigenvalues of the dense pencil (ascending), for verification.
Vector sym_eig_all_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd* m = nullptr);

/// Interpolants of (1,0), (0,1) and (-y,x) in the nodal DG basis.
struct RigidMotionBasis {
  std::array<Vector, 3> vectors;

  Eigen::MatrixXd matrix() const;
};

RigidMotionBasis rigid_motion_basis(const Mesh& mesh);

/// Euclidean orthogonal projection onto the complement of span(basis).
Vector project_out(const Vector& x, const Eigen::MatrixXd& basis);

/// P A P with P the projector onto the complement of span(basis).
LinearOperator deflate(const LinearOperator& a, const Eigen::MatrixXd& basis);

}  // namespace edg
