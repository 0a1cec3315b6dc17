#pragma once

#include "edg/assembly.hpp"
#include "edg/mesh.hpp"

#include <Eigen/Dense>

namespace edg::test {

inline Mesh pure_neumann(const Mesh& m) { return classify_boundary(m, sides_predicate({"all"})); }

inline Mesh lshape_mixed(int level) { return refine(classify_boundary(lshape_coarse(), sides_predicate({"y=0", "y=1"})), level); }

inline Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

}  // namespace edg::test
