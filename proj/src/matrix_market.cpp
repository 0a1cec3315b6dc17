#include "edg/matrix_market.hpp"

#include <unsupported/Eigen/SparseExtra>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace edg {

bool is_symmetric(const SparseMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (a.nonZeros() == 0) return true;
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  const double scale = a.coeffs().cwiseAbs().maxCoeff();
  return diff.nonZeros() == 0 || diff.coeffs().cwiseAbs().maxCoeff() <= tol * scale;
}

void save_matrix_market(const SparseMatrix& a, const std::string& path) {
  bool ok = false;
  if (is_symmetric(a)) {
    const SparseMatrix lower = a.triangularView<Eigen::Lower>();
    ok = Eigen::saveMarket(lower, path, Eigen::Symmetric);
  } else {
    ok = Eigen::saveMarket(a, path);
  }
  if (!ok) throw std::runtime_error("cannot write " + path);
}

SparseMatrix load_matrix_market(const std::string& path) {
  int sym = 0;
  bool complex = false, vector = false;
  if (!Eigen::getMarketHeader(path, sym, complex, vector)) throw std::runtime_error("cannot read " + path);
  if (complex || vector) throw std::runtime_error(path + ": expected a real coordinate matrix");
  SparseMatrix a;
  if (!Eigen::loadMarket(a, path)) throw std::runtime_error("cannot read " + path);
  if (sym != 0) {
    const SparseMatrix lower = a.triangularView<Eigen::Lower>();
    const SparseMatrix strict = a.triangularView<Eigen::StrictlyLower>();
    a = lower + SparseMatrix(strict.transpose());
  }
  return a;
}

void save_vector(const Vector& v, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Index i = 0; i < v.size(); ++i) std::fprintf(out, "%.17g\n", v[i]);
  std::fclose(out);
}

Vector load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<double> values;
  double x;
  while (in >> x) values.push_back(x);
  if (!in.eof()) throw std::runtime_error(path + ": malformed value");
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace edg
