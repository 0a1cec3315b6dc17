#pragma once

#include "edg/types.hpp"

#include <string>

namespace edg {

/// Writes `a` in Matrix Market coordinate format. Symmetric matrices keep
/// only the lower triangle and get the `symmetric` qualifier; anything else
/// is written as `general`.
void save_matrix_market(const SparseMatrix& a, const std::string& path);

/// Reads real coordinate files, expanding symmetric storage.
SparseMatrix load_matrix_market(const std::string& path);

/// One value per line, 17 significant digits.
void save_vector(const Vector& v, const std::string& path);
Vector load_vector(const std::string& path);

/// max |a - a^T| <= tol * max |a|
bool is_symmetric(const SparseMatrix& a, double tol = 1e-13);

}  // namespace edg
