#include "edg/splitting.hpp"

#include "edg/quadrature.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace edg {

SparseMatrix BlockOperator::assembled() const {
  const Index n = nz() + nv();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(zz.nonZeros() + zv.nonZeros() + vz.nonZeros() + vv.nonZeros()));
  const auto add = [&trip](const SparseMatrix& m, Index r0, Index c0) {
    for (Index c = 0; c < m.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(m, c); it; ++it) trip.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
  };
  add(zz, 0, 0);
  add(zv, 0, nz());
  add(vz, nz(), 0);
  add(vv, nz(), nz());
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

BlockOperator block_partition(const SparseMatrix& a, const SparseMatrix& q, Index nz) {
  if (a.rows() != a.cols() || a.cols() != q.rows() || q.rows() != q.cols() || nz < 0 || nz > q.cols()) {
    throw std::invalid_argument("block_partition: inconsistent dimensions");
  }
  const SparseMatrix t = q.transpose() * a * q;
  const Index nv = t.rows() - nz;
  BlockOperator b;
  b.zz = t.topLeftCorner(nz, nz);
  b.zv = t.topRightCorner(nz, nv);
  b.vz = t.bottomLeftCorner(nv, nz);
  b.vv = t.bottomRightCorner(nv, nv);
  for (SparseMatrix* m : {&b.zz, &b.zv, &b.vz, &b.vv}) m->makeCompressed();
  return b;
}

PreconditionerB::PreconditionerB(const BlockOperator& blocks, SparseMatrix q, bool allow_singular)
    : q_(std::move(q)),
      zz_(std::make_shared<SymmetricFactorization>(blocks.zz)),
      vv_(std::make_shared<SymmetricFactorization>(blocks.vv, allow_singular)) {
  if (q_.cols() != blocks.nz() + blocks.nv()) throw std::invalid_argument("PreconditionerB: basis change does not match blocks");
}

Vector PreconditionerB::apply_split(const Vector& r_split) const {
  const Index nz = zz_->rows();
  Vector out(r_split.size());
  out.head(nz) = zz_->solve(r_split.head(nz));
  out.tail(vv_->rows()) = vv_->solve(r_split.tail(vv_->rows()));
  return out;
}

Vector PreconditionerB::apply(const Vector& r) const { return q_ * apply_split(q_.transpose() * r); }

LinearOperator PreconditionerB::as_operator() const {
  return [self = *this](const Vector& r) { return self.apply(r); };
}

double cbs_gamma_sq(const BlockOperator& blocks, const GammaOptions& opt) {
  if (blocks.nz() == 0 || blocks.nv() == 0) return 0.0;
  const auto zz = std::make_shared<SymmetricFactorization>(blocks.zz);
  const auto vv = std::make_shared<SymmetricFactorization>(blocks.vv, opt.allow_singular_cr);
  if (blocks.zv.nonZeros() == 0) return 0.0;
  LanczosOptions lo = opt.lanczos;
  lo.which = Extremes::Largest;
  const SparseMatrix& zv = blocks.zv;
  const SparseMatrix& vz = blocks.vz;
  const EigenExtremes ev = lanczos_extremes(
      blocks.nz(), [&](const Vector& x) -> Vector { return zv * vv->solve(vz * x); }, as_operator(blocks.zz),
      [zz](const Vector& x) { return zz->solve(x); }, lo);
  const double gamma_sq = std::max(ev.lambda_max, 0.0);
  if (!(gamma_sq < 1.0)) {
    std::ostringstream msg;
    msg << "CBS constant gamma^2 = " << gamma_sq << " is not below 1";
    throw std::domain_error(msg.str());
  }
  return gamma_sq;
}

EigenExtremes precond_spectrum(const BlockOperator& blocks, const GammaOptions& opt) {
  const SparseMatrix a = blocks.assembled();
  BlockOperator diag = blocks;
  diag.zv = SparseMatrix(blocks.nz(), blocks.nv());
  diag.vz = SparseMatrix(blocks.nv(), blocks.nz());
  const SparseMatrix b = diag.assembled();
  const auto zz = std::make_shared<SymmetricFactorization>(blocks.zz);
  const auto vv = std::make_shared<SymmetricFactorization>(blocks.vv, opt.allow_singular_cr);
  const Index nz = blocks.nz();
  LanczosOptions lo = opt.lanczos;
  for (Index c = 0; c < vv->kernel().cols(); ++c) {
    Vector k = Vector::Zero(a.rows());
    k.tail(blocks.nv()) = vv->kernel().col(c);
    lo.deflate.push_back(k);
  }
  return lanczos_extremes(
      a.rows(), as_operator(a), as_operator(b),
      [zz, vv, nz](const Vector& x) -> Vector {
        Vector y(x.size());
        y.head(nz) = zz->solve(x.head(nz));
        y.tail(x.size() - nz) = vv->solve(x.tail(x.size() - nz));
        return y;
      },
      lo);
}

double cond_precond(const BlockOperator& blocks, const GammaOptions& opt) {
  const EigenExtremes ev = precond_spectrum(blocks, opt);
  if (!(ev.lambda_min > 0.0)) throw SingularMatrixError("preconditioned operator is singular", 1);
  return ev.condition();
}

SparseMatrix scaled_zz(const BlockOperator& blocks, const Vector& scaling) {
  if (scaling.size() == 0) return blocks.zz;
  if (scaling.size() != blocks.nz()) throw std::invalid_argument("scaled_zz: scaling does not match the Z block");
  return SparseMatrix(scaling.asDiagonal() * blocks.zz * scaling.asDiagonal());
}

EigenExtremes zz_spectrum(const BlockOperator& blocks, const Vector& scaling, const LanczosOptions& opt) {
  const SparseMatrix zz = scaled_zz(blocks, scaling);
  return sym_eig_extremes(zz, nullptr, opt);
}

double rho_bound(const JumpGram& sd, const LanczosOptions& opt) {
  LanczosOptions lo = opt;
  lo.which = Extremes::Largest;
  const Vector d = sd.D;
  return lanczos_extremes(
             sd.S.rows(), as_operator(sd.S), [d](const Vector& x) -> Vector { return d.cwiseProduct(x); },
             [d](const Vector& x) -> Vector { return x.cwiseQuotient(d); }, lo)
      .lambda_max;
}

double rho_upper_bound(const Mesh& mesh) {
  const auto ratio = [&mesh](Index f) { return mesh.face(f).measure() / mesh.face(f).diameter; };
  double worst = 0.0;
  for (Index e2 = 0; e2 < mesh.num_faces(); ++e2) {
    if (mesh.face(e2).kind == FaceKind::Neumann) continue;
    const auto n1_e2 = neighbor_set(mesh, e2, 1);
    for (Index e1 : neighbor_set(mesh, e2, 2)) {
      if (mesh.face(e1).kind == FaceKind::Neumann) continue;
      const auto n1_e1 = neighbor_set(mesh, e1, 1);
      for (Index e : n1_e1) {
        if (!std::binary_search(n1_e2.begin(), n1_e2.end(), e)) continue;
        worst = std::max(worst, ratio(e) * std::sqrt(1.0 / (ratio(e1) * ratio(e2))));
      }
    }
  }
  const double k = 2.0 * kDim + 1.0;
  return k * k * k * worst;
}

double projected_jump_ratio(const Mesh& mesh, const SplitLayout& layout, const Vector& z) {
  const Vector u = recombine(mesh, layout, {z, Vector::Zero(layout.nv())});
  double deviation = 0.0, total = 0.0;
  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    if (f.kind == FaceKind::Neumann) continue;
    const Eigen::Vector2d mean = midpoint_project(mesh, u, fi, Trace::Jump);
    const Point& a = mesh.vertex(f.vertices[0]);
    const Point& b = mesh.vertex(f.vertices[1]);
    for (const auto& q : quad::gauss2()) {
      const Eigen::Vector2d jump = trace_at(mesh, u, fi, quad::on_segment(a, b, q.t), Trace::Jump);
      const double w = q.weight * f.measure() / f.diameter;
      deviation += w * (jump - mean).squaredNorm();
      total += w * jump.squaredNorm();
    }
  }
  return total == 0.0 ? 0.0 : deviation / total;
}

double verify_projected_jump_inequality(const Mesh& mesh, int samples, std::uint64_t seed) {
  const SplitLayout layout(mesh);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector z = Vector::NullaryExpr(layout.nz(), [&]() { return normal(rng); });
    worst = std::max(worst, projected_jump_ratio(mesh, layout, z));
  }
  return worst;
}

}  // namespace edg
