#include "edg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

namespace edg {

namespace {

bool finite(double x) { return std::isfinite(x); }

SolveResult conjugate_gradients(const LinearOperator& a, const LinearOperator* precond, const Vector& b, double tol,
                                int maxit) {
  SolveResult out;
  out.x = Vector::Zero(b.size());
  const double bnorm = b.norm();
  if (!finite(bnorm)) throw ConvergenceError("CG: right-hand side is not finite");
  out.history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (bnorm == 0.0) {
    out.report = {0, 0.0, true};
    return out;
  }
  Vector r = b;
  Vector z = precond ? (*precond)(r) : r;
  Vector p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= maxit; ++it) {
    const Vector ap = a(p);
    const double pap = p.dot(ap);
    if (!finite(pap)) throw ConvergenceError("CG: non-finite curvature");
    if (pap <= 0.0) {
      std::ostringstream msg;
      msg << "CG breakdown: p^T A p = " << pap << " at iteration " << it;
      throw ConvergenceError(msg.str());
    }
    const double alpha = rz / pap;
    out.x += alpha * p;
    r -= alpha * ap;
    const double rel = r.norm() / bnorm;
    if (!finite(rel)) throw ConvergenceError("CG: residual is not finite");
    out.history.push_back(rel);
    out.report = {it, rel, rel <= tol};
    if (rel <= tol) return out;
    z = precond ? (*precond)(r) : r;
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return out;
}

// Solves a tridiagonal system with partial pivoting (LAPACK gtsv scheme).
// Exactly zero pivots are replaced by `tiny`, as inverse iteration needs.
Vector tridiagonal_solve(Vector dl, Vector d, Vector du, Vector b, double tiny) {
  const Index n = d.size();
  if (n == 1) return b / (d[0] == 0.0 ? tiny : d[0]);
  Vector du2 = Vector::Zero(std::max<Index>(n - 2, 0));
  for (Index i = 0; i < n - 1; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i < n - 2) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double bt = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bt - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  b[n - 1] /= d[n - 1];
  b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (Index i = n - 3; i >= 0; --i) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  return b;
}

// Last component of the unit eigenvector of tridiag(beta, alpha, beta) for
// the eigenvalue theta, by two steps of inverse iteration.
double last_eigvec_component(const Vector& alpha, const Vector& beta, double theta, double scale) {
  const Index m = alpha.size();
  if (m == 1) return 1.0;
  const double tiny = 1e-300 + std::numeric_limits<double>::epsilon() * scale;
  Vector x = Vector::Ones(m) / std::sqrt(double(m));
  const Vector diag = alpha.array() - theta;
  for (int step = 0; step < 3; ++step) {
    x = tridiagonal_solve(beta, diag, beta, x, tiny);
    const double nrm = x.norm();
    if (!finite(nrm) || nrm == 0.0) return 1.0;
    x /= nrm;
  }
  return x[m - 1];
}

}  // namespace

SolveResult cg(const LinearOperator& a, const Vector& b, double tol, int maxit) {
  return conjugate_gradients(a, nullptr, b, tol, maxit);
}

SolveResult cg(const SparseMatrix& a, const Vector& b, double tol, int maxit) { return cg(as_operator(a), b, tol, maxit); }

SolveResult pcg(const LinearOperator& a, const LinearOperator& precond, const Vector& b, double tol, int maxit) {
  return conjugate_gradients(a, &precond, b, tol, maxit);
}

SymmetricFactorization::SymmetricFactorization(const SparseMatrix& a, bool allow_singular, double pivot_tol)
    : n_(a.rows()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorization needs a square matrix");
  const double scale = a.diagonal().cwiseAbs().maxCoeff();
  const double tol = pivot_tol * scale;
  ldlt_.compute(a);
  if (ldlt_.info() != Eigen::Success && allow_singular) {
    // an exactly zero pivot stops the factorization; a roundoff-sized shift
    // lets it finish and still registers as a null pivot
    ldlt_.setShift(std::numeric_limits<double>::epsilon() * scale);
    ldlt_.compute(a);
  }
  if (ldlt_.info() != Eigen::Success) throw SingularMatrixError("LDL^T factorization hit an exact zero pivot", -1);
  const Vector d = ldlt_.vectorD();
  inv_pivots_.resize(n_);
  for (Index i = 0; i < n_; ++i) {
    if (std::abs(d[i]) <= tol) {
      null_pivots_.push_back(i);
      inv_pivots_[i] = 0.0;
    } else if (d[i] < 0.0) {
      std::ostringstream msg;
      msg << "matrix is indefinite: pivot " << d[i] << " at position " << i;
      throw std::domain_error(msg.str());
    } else {
      inv_pivots_[i] = 1.0 / d[i];
    }
  }
  if (!null_pivots_.empty()) {
    if (!allow_singular) {
      std::ostringstream msg;
      msg << "matrix is singular: " << null_pivots_.size() << " pivots below " << tol;
      throw SingularMatrixError(msg.str(), null_dim());
    }
    Eigen::MatrixXd k(n_, null_dim());
    for (Index c = 0; c < null_dim(); ++c) {
      Vector e = Vector::Zero(n_);
      e[null_pivots_[static_cast<std::size_t>(c)]] = 1.0;
      ldlt_.matrixU().solveInPlace(e);
      k.col(c) = ldlt_.permutationPinv() * e;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(k);
    kernel_ = qr.householderQ() * Eigen::MatrixXd::Identity(n_, null_dim());
  } else {
    kernel_.resize(n_, 0);
  }
}

Vector SymmetricFactorization::solve(const Vector& b) const {
  if (b.size() != n_) throw std::invalid_argument("factorization solve: size mismatch");
  Vector y = ldlt_.permutationP() * b;
  ldlt_.matrixL().solveInPlace(y);
  y.array() *= inv_pivots_.array();
  ldlt_.matrixU().solveInPlace(y);
  Vector x = ldlt_.permutationPinv() * y;
  if (kernel_.cols() > 0) x -= kernel_ * (kernel_.transpose() * x);
  return x;
}

EigenExtremes lanczos_extremes(Index n, const LinearOperator& apply_a, const LinearOperator& apply_m,
                               const LinearOperator& solve_m, const LanczosOptions& opt) {
  if (n <= 0) throw std::invalid_argument("Lanczos on an empty operator");
  const auto m_apply = [&](const Vector& x) -> Vector { return apply_m ? apply_m(x) : x; };
  const auto m_solve = [&](const Vector& x) -> Vector { return solve_m ? solve_m(x) : x; };

  // Deflated vectors span a common kernel of A and M, so the projection is
  // Euclidean; the M inner product is only definite on the complement.
  Eigen::MatrixXd r(n, static_cast<Index>(opt.deflate.size()));
  for (std::size_t i = 0; i < opt.deflate.size(); ++i) r.col(static_cast<Index>(i)) = opt.deflate[i];
  Eigen::MatrixXd rq;
  if (r.cols() > 0) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
    rq = qr.householderQ() * Eigen::MatrixXd::Identity(n, r.cols());
  }
  const auto deflate_m = [&](Vector& x) {
    if (r.cols() > 0) x -= rq * (rq.transpose() * x);
  };
  const Index reachable = n - r.cols();
  if (reachable <= 0) throw std::invalid_argument("deflation space covers the whole operator");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  Vector q = Vector::NullaryExpr(n, [&]() { return normal(rng); });
  deflate_m(q);
  Vector mq = m_apply(q);
  {
    const double nrm = std::sqrt(q.dot(mq));
    q /= nrm;
    mq /= nrm;
  }
  std::vector<Vector> basis{q}, mbasis{mq};
  std::vector<double> alphas, betas;
  const int cap = static_cast<int>(std::min<Index>(opt.max_iterations, reachable));

  EigenExtremes result;
  for (int j = 0; j < cap; ++j) {
    const Vector aq = apply_a(basis.back());
    const double alpha = basis.back().dot(aq);
    if (!finite(alpha)) throw ConvergenceError("Lanczos: non-finite Rayleigh quotient");
    Vector w = m_solve(aq);
    w -= alpha * basis.back();
    if (j > 0) w -= betas.back() * basis[basis.size() - 2];
    deflate_m(w);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < basis.size(); ++i) w -= mbasis[i].dot(w) * basis[i];
    Vector mw = m_apply(w);
    const double beta = std::sqrt(std::max(w.dot(mw), 0.0));
    alphas.push_back(alpha);

    const Index m = static_cast<Index>(alphas.size());
    const Vector av = Eigen::Map<const Vector>(alphas.data(), m);
    const Vector bv = Eigen::Map<const Vector>(betas.data(), m - 1);
    const double scale = std::max(av.cwiseAbs().maxCoeff(), m > 1 ? bv.cwiseAbs().maxCoeff() : 0.0);
    const bool invariant = beta <= 1e-13 * std::max(scale, 1e-300);
    const bool last = invariant || j + 1 == cap;
    if (last || m % 5 == 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(av, bv, Eigen::EigenvaluesOnly);
      const Vector& theta = tri.eigenvalues();
      const double tmin = theta[0], tmax = theta[m - 1];
      const double ref = std::max(std::abs(tmin), std::abs(tmax));
      const auto converged = [&](double t) {
        return std::abs(beta * last_eigvec_component(av, bv, t, scale)) <= opt.tolerance * std::max(ref, 1e-300);
      };
      const bool ok_min = opt.which == Extremes::Largest || invariant || converged(tmin);
      const bool ok_max = opt.which == Extremes::Smallest || invariant || converged(tmax);
      result = {tmin, tmax, static_cast<int>(m)};
      if (ok_min && ok_max) return result;
      if (last && j + 1 == cap && cap == reachable) return result;  // Krylov space exhausted: exact
    }
    betas.push_back(beta);
    basis.push_back(w / beta);
    mbasis.push_back(mw / beta);
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge in " << cap << " iterations";
  throw ConvergenceError(msg.str());
}

EigenExtremes sym_eig_extremes(const SparseMatrix& a, const SparseMatrix* m, const LanczosOptions& opt) {
  if (!m) return lanczos_extremes(a.rows(), as_operator(a), {}, {}, opt);
  auto fact = std::make_shared<SymmetricFactorization>(*m);
  return lanczos_extremes(a.rows(), as_operator(a), as_operator(*m), [fact](const Vector& x) { return fact->solve(x); }, opt);
}

Vector sym_eig_all_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd* m) {
  if (!m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, *m, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolver failed");
  return es.eigenvalues();
}

EigenExtremes sym_eig_extremes_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd* m) {
  const Vector ev = sym_eig_all_dense(a, m);
  return {ev[0], ev[ev.size() - 1], static_cast<int>(ev.size())};
}

Eigen::MatrixXd RigidMotionBasis::matrix() const {
  Eigen::MatrixXd r(vectors[0].size(), 3);
  for (int i = 0; i < 3; ++i) r.col(i) = vectors[static_cast<std::size_t>(i)];
  return r;
}

RigidMotionBasis rigid_motion_basis(const Mesh& mesh) {
  const Index n = 6 * mesh.num_triangles();
  RigidMotionBasis rm{{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)}};
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const Point& m = mesh.face(mesh.element_face(t, i)).midpoint;
      const Index k = 6 * t + 2 * i;
      rm.vectors[0][k] = 1.0;
      rm.vectors[1][k + 1] = 1.0;
      rm.vectors[2][k] = -m.y();
      rm.vectors[2][k + 1] = m.x();
    }
  }
  return rm;
}

Vector project_out(const Vector& x, const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return x;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
  return x - q * (q.transpose() * x);
}

LinearOperator deflate(const LinearOperator& a, const Eigen::MatrixXd& basis) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
  return [a, q](const Vector& x) -> Vector {
    const Vector px = x - q * (q.transpose() * x);
    const Vector y = a(px);
    return y - q * (q.transpose() * y);
  };
}

}  // namespace edg
