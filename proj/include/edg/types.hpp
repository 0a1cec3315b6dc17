#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edg {

using Index = Eigen::Index;
using Point = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Spatial dimension of every mesh built by this library.
inline constexpr int kDim = 2;

/// A system matrix that is singular beyond the pivot tolerance.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, Index null_dim)
      : std::runtime_error(what), null_dim_(null_dim) {}
  Index null_dim() const noexcept { return null_dim_; }

 private:
  Index null_dim_;
};

/// An iterative method that failed to converge or produced non-finite values.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symmetric IP matrix that is not coercive on a probe vector.
class CoercivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edg
