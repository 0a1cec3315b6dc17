#pragma once

#include "edg/assembly.hpp"
#include "edg/dgspace.hpp"
#include "edg/spectral.hpp"

#include <memory>

namespace edg {

/// Q^T A Q in the split basis, Z coordinates first.
struct BlockOperator {
  SparseMatrix zz, zv, vz, vv;

  Index nz() const { return zz.rows(); }
  Index nv() const { return vv.rows(); }
  /// The whole split-basis matrix.
  SparseMatrix assembled() const;
};

BlockOperator block_partition(const SparseMatrix& a, const SparseMatrix& q, Index nz);

/// Block-diagonal subspace correction with exact subsolves:
/// solve on Z, solve on CR, add. Applied to nodal residuals.
class PreconditionerB {
 public:
  /// With `allow_singular` a singular CR block (traction-free problems) is
  /// inverted on the complement of its kernel instead of raising
  /// SingularMatrixError.
  PreconditionerB(const BlockOperator& blocks, SparseMatrix q, bool allow_singular = false);

  /// u = Q blockdiag(A_zz, A_vv)^-1 Q^T r
  Vector apply(const Vector& r) const;
  /// Block solve on split coordinates.
  Vector apply_split(const Vector& r_split) const;

  const SymmetricFactorization& zz() const { return *zz_; }
  const SymmetricFactorization& vv() const { return *vv_; }
  LinearOperator as_operator() const;

 private:
  SparseMatrix q_;
  std::shared_ptr<SymmetricFactorization> zz_, vv_;
};

struct GammaOptions {
  bool allow_singular_cr = true;
  LanczosOptions lanczos{};
};

/// Largest eigenvalue of A_zv A_vv^-1 A_vz q = gamma^2 A_zz q.
double cbs_gamma_sq(const BlockOperator& blocks, const GammaOptions& opt = {});

/// Extreme eigenvalues of the pencil (A, blockdiag(A_zz, A_vv)) in split
/// coordinates; the condition number is kappa(B^-1 A).
EigenExtremes precond_spectrum(const BlockOperator& blocks, const GammaOptions& opt = {});
double cond_precond(const BlockOperator& blocks, const GammaOptions& opt = {});

/// A_zz in the Z basis rescaled by diag(scaling); empty keeps psi^z.
SparseMatrix scaled_zz(const BlockOperator& blocks, const Vector& scaling = {});

/// Extreme eigenvalues of scaled_zz(blocks, scaling).
EigenExtremes zz_spectrum(const BlockOperator& blocks, const Vector& scaling = {}, const LanczosOptions& opt = {});

/// lambda_max(D^-1/2 S D^-1/2).
double rho_bound(const JumpGram& sd, const LanczosOptions& opt = {});

/// Shape-regularity bound on rho: (2d+1)^3 times the largest
/// (|E|/h_E) sqrt(h_E' h_E'' / (|E'||E''|)) over face triples.
double rho_upper_bound(const Mesh& mesh);

/// sum h^-1 |[z] - P0[z]|^2 / sum h^-1 |[z]|^2 over interior and Dirichlet
/// faces, for the Z function with split coefficients `z`.
double projected_jump_ratio(const Mesh& mesh, const SplitLayout& layout, const Vector& z);

/// Max of projected_jump_ratio over `samples` random Z functions.
double verify_projected_jump_inequality(const Mesh& mesh, int samples, std::uint64_t seed);

}  // namespace edg
