#include "edg/assembly.hpp"

#include "edg/quadrature.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace edg {

Lame lame_from_engineering(double young, double poisson) {
  if (!(young > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(poisson >= 0.0 && poisson < 0.5)) throw std::invalid_argument("Poisson ratio must lie in [0, 0.5)");
  return {young / (2.0 * (1.0 + poisson)), poisson * young / ((1.0 + poisson) * (1.0 - 2.0 * poisson))};
}

MaterialField MaterialField::uniform(const Mesh& mesh, double young, double poisson) {
  MaterialField m;
  m.lame_.assign(static_cast<std::size_t>(mesh.num_triangles()), lame_from_engineering(young, poisson));
  return m;
}

MaterialField MaterialField::from_regions(const Mesh& mesh, const std::map<int, Engineering>& regions) {
  MaterialField m;
  m.lame_.reserve(static_cast<std::size_t>(mesh.num_triangles()));
  for (const auto& t : mesh.triangles()) {
    auto it = regions.find(t.region);
    if (it == regions.end()) throw std::invalid_argument("no material for region " + std::to_string(t.region));
    m.lame_.push_back(lame_from_engineering(it->second.young, it->second.poisson));
  }
  return m;
}

FaceWeights MaterialField::face_weights(const Mesh& mesh, Index face, double lambda_weight) const {
  const Face& f = mesh.face(face);
  const auto weights = [lambda_weight](const Lame& l) { return FaceWeights{lambda_weight * l.lambda + 2.0 * l.mu, 2.0 * l.mu}; };
  FaceWeights w = weights(element(f.t_plus));
  if (f.t_minus) {
    const FaceWeights o = weights(element(*f.t_minus));
    w.beta0 = std::max(w.beta0, o.beta0);
    w.beta1 = std::max(w.beta1, o.beta1);
  }
  return w;
}

MaterialField MaterialField::scaled(double factor) const {
  MaterialField m = *this;
  for (auto& l : m.lame_) {
    l.mu *= factor;
    l.lambda *= factor;
  }
  return m;
}

namespace {

using Strains = std::array<Eigen::Matrix2d, 6>;

// Symmetric gradients of the six local basis functions phi_i e_k.
Strains local_strains(const Mesh& mesh, Index t) {
  const auto grads = nodal_shape_gradients(mesh, t);
  Strains eps;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 2; ++k) {
      Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
      g.row(k) = grads.col(i).transpose();
      eps[static_cast<std::size_t>(2 * i + k)] = 0.5 * (g + g.transpose());
    }
  }
  return eps;
}

// (C eps(phi_j)) n for the six local functions, as a 2x6 block.
Eigen::Matrix<double, 2, 6> stress_normal(const Mesh& mesh, const MaterialField& mat, Index t, const Eigen::Vector2d& n) {
  const Strains eps = local_strains(mesh, t);
  const Lame& l = mat.element(t);
  Eigen::Matrix<double, 2, 6> out;
  for (int j = 0; j < 6; ++j) out.col(j) = apply_elasticity_tensor<double>(eps[static_cast<std::size_t>(j)], l.mu, l.lambda) * n;
  return out;
}

// Local trace data of a face: the element coefficient blocks it couples and
// the jump operator at a point.
struct FaceDofs {
  std::vector<Index> dofs;  // 6 or 12 global indices, plus side first

  explicit FaceDofs(const Face& f) {
    for (Index e : {f.t_plus, f.t_minus.value_or(-1)}) {
      if (e < 0) continue;
      for (int j = 0; j < 6; ++j) dofs.push_back(6 * e + j);
    }
  }
  Index size() const { return static_cast<Index>(dofs.size()); }
};

Eigen::MatrixXd jump_operator(const Mesh& mesh, const Face& f, const Point& x) {
  Eigen::MatrixXd j(2, f.t_minus ? 12 : 6);
  j.leftCols<6>() = trace_operator(mesh, f.t_plus, x);
  if (f.t_minus) j.rightCols<6>() = -trace_operator(mesh, *f.t_minus, x);
  return j;
}

Eigen::MatrixXd average_stress_normal(const Mesh& mesh, const MaterialField& mat, const Face& f) {
  Eigen::MatrixXd s(2, f.t_minus ? 12 : 6);
  if (f.t_minus) {
    s.leftCols<6>() = 0.5 * stress_normal(mesh, mat, f.t_plus, f.normal);
    s.rightCols<6>() = 0.5 * stress_normal(mesh, mat, *f.t_minus, f.normal);
  } else {
    s = stress_normal(mesh, mat, f.t_plus, f.normal);
  }
  return s;
}

void scatter(std::vector<Triplet>& trip, const FaceDofs& d, const Eigen::MatrixXd& local) {
  for (Index r = 0; r < d.size(); ++r)
    for (Index c = 0; c < d.size(); ++c)
      if (local(r, c) != 0.0) trip.emplace_back(d.dofs[static_cast<std::size_t>(r)], d.dofs[static_cast<std::size_t>(c)], local(r, c));
}

SparseMatrix from_triplets(Index n, const std::vector<Triplet>& trip) {
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

bool penalized(const Face& f) { return f.kind != FaceKind::Neumann; }

enum class JumpRule { Midpoint, Gauss };

// sum over penalized faces of weight(f) / h_E * int_E <[u],[w]> with the
// projected (midpoint) or full (Gauss) jump.
template <typename Weight>
SparseMatrix jump_mass(const Mesh& mesh, JumpRule rule, Weight weight) {
  std::vector<Triplet> trip;
  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    if (!penalized(f)) continue;
    const FaceDofs d(f);
    const double scale = weight(fi) / f.diameter * f.measure();
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(d.size(), d.size());
    if (rule == JumpRule::Midpoint) {
      const Eigen::MatrixXd j = jump_operator(mesh, f, f.midpoint);
      local = scale * j.transpose() * j;
    } else {
      const Point& a = mesh.vertex(f.vertices[0]);
      const Point& b = mesh.vertex(f.vertices[1]);
      for (const auto& q : quad::gauss2()) {
        const Eigen::MatrixXd j = jump_operator(mesh, f, quad::on_segment(a, b, q.t));
        local += scale * q.weight * j.transpose() * j;
      }
    }
    scatter(trip, d, local);
  }
  return from_triplets(6 * mesh.num_triangles(), trip);
}

}  // namespace

SparseMatrix assemble_volume(const Mesh& mesh, const MaterialField& mat) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(36 * mesh.num_triangles()));
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Strains eps = local_strains(mesh, t);
    const Lame& l = mat.element(t);
    const double area = mesh.area(t);
    for (int j = 0; j < 6; ++j) {
      const Eigen::Matrix2d sigma = apply_elasticity_tensor<double>(eps[static_cast<std::size_t>(j)], l.mu, l.lambda);
      for (int i = 0; i < 6; ++i) {
        const double v = area * (sigma.array() * eps[static_cast<std::size_t>(i)].array()).sum();
        if (v != 0.0) trip.emplace_back(6 * t + i, 6 * t + j, v);
      }
    }
  }
  return from_triplets(6 * mesh.num_triangles(), trip);
}

SparseMatrix assemble_gradient_volume(const Mesh& mesh) {
  std::vector<Triplet> trip;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = nodal_shape_gradients(mesh, t);
    const Eigen::Matrix3d k = mesh.area(t) * g.transpose() * g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 2; ++c) trip.emplace_back(6 * t + 2 * i + c, 6 * t + 2 * j + c, k(i, j));
  }
  return from_triplets(6 * mesh.num_triangles(), trip);
}

SparseMatrix assemble_consistency(const Mesh& mesh, const MaterialField& mat) {
  std::vector<Triplet> trip;
  for (const Face& f : mesh.faces()) {
    if (!penalized(f)) continue;
    const FaceDofs d(f);
    // {C eps(u) n} is constant on the face and [w] is linear: midpoint exact.
    const Eigen::MatrixXd local = f.measure() * jump_operator(mesh, f, f.midpoint).transpose() * average_stress_normal(mesh, mat, f);
    scatter(trip, d, local);
  }
  return from_triplets(6 * mesh.num_triangles(), trip);
}

SparseMatrix assemble_penalty0(const Mesh& mesh, const MaterialField& mat, double alpha0, double beta0_lambda) {
  return jump_mass(mesh, JumpRule::Midpoint, [&](Index f) { return alpha0 * mat.face_weights(mesh, f, beta0_lambda).beta0; });
}

SparseMatrix assemble_penalty1(const Mesh& mesh, const MaterialField& mat, double alpha1) {
  return jump_mass(mesh, JumpRule::Gauss, [&](Index f) { return alpha1 * mat.face_weights(mesh, f).beta1; });
}

SparseMatrix IPOperators::ip1(int theta) const {
  SparseMatrix ct = consistency.transpose();
  return SparseMatrix(volume - consistency + double(theta) * ct + penalty0 + penalty1);
}

SparseMatrix IPOperators::ip0() const {
  SparseMatrix ct = consistency.transpose();
  return SparseMatrix(volume - consistency - ct + penalty0);
}

IPOperators assemble_operators(const Mesh& mesh, const MaterialField& mat, const PenaltyParams& pen) {
  if (mat.size() != mesh.num_triangles()) throw std::invalid_argument("material field does not match the mesh");
  if (pen.theta < -1 || pen.theta > 1) throw std::invalid_argument("theta must be -1, 0 or 1");
  return {assemble_volume(mesh, mat), assemble_consistency(mesh, mat), assemble_penalty0(mesh, mat, pen.alpha0, pen.beta0_lambda),
          assemble_penalty1(mesh, mat, pen.alpha1)};
}

SparseMatrix assemble_A(const Mesh& mesh, const MaterialField& mat, const PenaltyParams& pen) {
  SparseMatrix a = assemble_operators(mesh, mat, pen).ip1(pen.theta);
  if (pen.theta == -1 && pen.alpha0 >= 4.0) {
    std::mt19937_64 rng(20100611);
    std::normal_distribution<double> normal;
    for (int probe = 0; probe < 4; ++probe) {
      Vector x = Vector::NullaryExpr(a.rows(), [&]() { return normal(rng); });
      const double rq = x.dot(a * x) / x.squaredNorm();
      if (rq < -1e-12 * a.coeffs().cwiseAbs().maxCoeff()) {
        std::ostringstream msg;
        msg << "IP matrix not coercive: Rayleigh quotient " << rq << " on probe " << probe;
        throw CoercivityError(msg.str());
      }
    }
  }
  return a;
}

SparseMatrix assemble_A0(const Mesh& mesh, const MaterialField& mat, const PenaltyParams& pen) {
  return assemble_operators(mesh, mat, pen).ip0();
}

Vector assemble_rhs(const Mesh& mesh, const MaterialField& mat, const LoadSpec& load) {
  if (mat.size() != mesh.num_triangles()) throw std::invalid_argument("material field does not match the mesh");
  Vector f = Vector::Zero(6 * mesh.num_triangles());
  if (load.body_force) {
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const auto& v = mesh.triangle(t).vertices;
      const double w = mesh.area(t) / 3.0;
      for (const Point& x : quad::edge_midpoints(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])))
        f.segment<6>(6 * t) += w * trace_operator(mesh, t, x).transpose() * load.body_force(x);
    }
  }
  if (load.traction) {
    for (const Face& face : mesh.faces()) {
      if (face.kind != FaceKind::Neumann) continue;
      const Point& a = mesh.vertex(face.vertices[0]);
      const Point& b = mesh.vertex(face.vertices[1]);
      for (const auto& q : quad::gauss2()) {
        const Point x = quad::on_segment(a, b, q.t);
        f.segment<6>(6 * face.t_plus) +=
            q.weight * face.measure() * trace_operator(mesh, face.t_plus, x).transpose() * load.traction(x, face.normal);
      }
    }
  }
  return f;
}

JumpGram assemble_S_D(const Mesh& mesh) {
  const SplitLayout layout(mesh);
  const SparseMatrix q = basis_change_matrix(mesh, layout);
  const SparseMatrix unit = jump_mass(mesh, JumpRule::Gauss, [](Index) { return 1.0; });
  const SparseMatrix qz = q.leftCols(layout.nz());
  const SparseMatrix gram = qz.transpose() * unit * qz;

  // The vector form is block diagonal in the component; keep the x block.
  const Index n = layout.nz() / 2;
  std::vector<Triplet> trip;
  for (Index c = 0; c < gram.outerSize(); c += 2)
    for (SparseMatrix::InnerIterator it(gram, c); it; ++it)
      if (it.row() % 2 == 0) trip.emplace_back(it.row() / 2, c / 2, it.value());
  JumpGram out;
  out.S = from_triplets(n, trip);
  out.D.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Face& f = mesh.face(layout.z_faces()[static_cast<std::size_t>(i)]);
    out.D[i] = f.measure() / f.diameter;
  }
  return out;
}

DGNorms dg_norms(const Vector& u, const Mesh& mesh, const MaterialField& mat) {
  if (u.size() != 6 * mesh.num_triangles()) throw std::invalid_argument("dg_norms: vector does not match the mesh");
  const double strain = u.dot(assemble_volume(mesh, mat) * u);
  const double grad = u.dot(assemble_gradient_volume(mesh) * u);
  const double projected = u.dot(assemble_penalty0(mesh, mat, 1.0) * u);
  const double full = u.dot(assemble_penalty1(mesh, mat, 1.0) * u);
  return {strain + projected, strain + projected + full, grad + projected + full};
}

}  // namespace edg
