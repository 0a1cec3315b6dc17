#include "helpers.hpp"

#include "edg/dgspace.hpp"
#include "edg/spectral.hpp"
#include "edg/splitting.hpp"

#include <doctest.h>

#include <random>

using namespace edg;

namespace {

Vector interpolate_linear(const Mesh& m, const Eigen::Matrix2d& g, const Eigen::Vector2d& c) {
  const DofMap dofs = build_dofmap(m);
  Vector u(dofs.dim());
  for (Index t = 0; t < m.num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d val = g * m.face(m.element_face(t, i)).midpoint + c;
      u(dofs(t, i, 0)) = val.x();
      u(dofs(t, i, 1)) = val.y();
    }
  return u;
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (Index c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace

TEST_CASE("plane strain Lame parameters") {
  const Lame l = lame_from_engineering(2.0, 0.25);
  CHECK(l.mu == doctest::Approx(0.8));
  CHECK(l.lambda == doctest::Approx(0.8));
  const Lame n = lame_from_engineering(1.0, 0.49999);
  CHECK(n.lambda / n.mu == doctest::Approx(2.0 * 0.49999 / (1.0 - 2.0 * 0.49999)));
}

TEST_CASE("elasticity tensor Rayleigh quotients on symmetric matrices") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double mu = 0.4, lambda = 12.0;
  for (int i = 0; i < 100; ++i) {
    Eigen::Matrix2d a;
    a << u(rng), u(rng), 0.0, u(rng);
    a(1, 0) = a(0, 1);
    const double q = apply_elasticity_tensor<double>(a, mu, lambda).cwiseProduct(a).sum() / a.squaredNorm();
    CHECK(q >= 2.0 * mu - 1e-12);
    CHECK(q <= 2.0 * mu + 2.0 * lambda + 1e-12);
  }
}

TEST_CASE("face penalty weights take the larger side at an interface") {
  const Mesh m = assign_regions(refine(unit_square_coarse(), 1), [](const Point& x) { return x.x() < 0.5 ? 1 : 2; });
  const MaterialField mat = MaterialField::from_regions(m, {{1, {1.0, 0.25}}, {2, {1.0, 0.45}}});
  const Lame a = lame_from_engineering(1.0, 0.25), b = lame_from_engineering(1.0, 0.45);
  bool saw_interface = false;
  for (Index f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    if (!face.interior() || std::abs(face.midpoint.x() - 0.5) > 1e-12 || std::abs(face.normal.x()) < 0.5) continue;
    saw_interface = true;
    const FaceWeights w = mat.face_weights(m, f);
    CHECK(w.beta0 == doctest::Approx(std::max(3.0 * a.lambda + 2.0 * a.mu, 3.0 * b.lambda + 2.0 * b.mu)));
    CHECK(w.beta1 == doctest::Approx(std::max(2.0 * a.mu, 2.0 * b.mu)));
    CHECK(mat.face_weights(m, f, 2.0).beta0 == doctest::Approx(2.0 * b.lambda + 2.0 * b.mu));
  }
  CHECK(saw_interface);
}

TEST_CASE("symmetry depends on theta") {
  const Mesh m = test::lshape_mixed(1);
  const MaterialField mat = MaterialField::uniform(m, 1.0, 0.3);
  for (int theta : {-1, 0, 1}) {
    PenaltyParams p;
    p.theta = theta;
    const SparseMatrix a = assemble_A(m, mat, p);
    const double asym = max_abs(SparseMatrix(a - SparseMatrix(a.transpose())));
    if (theta == -1)
      CHECK(asym <= 1e-13 * max_abs(a));
    else
      CHECK(asym > 1e-6 * max_abs(a));
  }
}

TEST_CASE("energy of a linear field on a traction-free square") {
  // Jumps of a continuous linear field vanish, so only the volume term is left.
  const Mesh m = refine(test::pure_neumann(unit_square_coarse()), 2);
  const double young = 1.3, nu = 0.35;
  const MaterialField mat = MaterialField::uniform(m, young, nu);
  const Lame l = lame_from_engineering(young, nu);
  Eigen::Matrix2d g;
  g << 0.7, -0.2, 0.5, -0.4;
  const Eigen::Matrix2d eps = 0.5 * (g + g.transpose());
  const double exact = 2.0 * l.mu * eps.squaredNorm() + l.lambda * eps.trace() * eps.trace();
  const Vector u = interpolate_linear(m, g, {0.1, 0.2});
  CHECK(u.dot(assemble_A(m, mat, {}) * u) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(u.dot(assemble_A0(m, mat, {}) * u) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(u.dot(assemble_gradient_volume(m) * u) == doctest::Approx(g.squaredNorm()).epsilon(1e-12));
  const DGNorms n = dg_norms(u, m, mat);
  CHECK(n.dg == doctest::Approx(exact).epsilon(1e-12));
  CHECK(n.h1 == doctest::Approx(g.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("rigid motions span the kernel of the traction-free operator") {
  for (int level = 1; level <= 4; ++level) {
    const Mesh m = refine(test::pure_neumann(lshape_coarse()), level);
    const SparseMatrix a = assemble_A(m, MaterialField::uniform(m, 1.0, 0.49999), {});
    const double norm = max_abs(a);
    for (const Vector& r : rigid_motion_basis(m).vectors) CHECK((a * r).norm() <= 1e-11 * norm * r.norm());
    CHECK(SymmetricFactorization(a, true).null_dim() == 3);
    CHECK_THROWS_AS(SymmetricFactorization{a}, SingularMatrixError);
  }
}

TEST_CASE("the reduced-integration operator decouples Z and CR") {
  for (const Mesh& m : {test::lshape_mixed(1), refine(unit_square_coarse(), 1), refine(test::pure_neumann(lshape_coarse()), 1)}) {
    for (double nu : {0.25, 0.49999}) {
      const SparseMatrix a0 = assemble_A0(m, MaterialField::uniform(m, 1.0, nu), {});
      const SplitLayout layout(m);
      const BlockOperator b = block_partition(a0, basis_change_matrix(m, layout), layout.nz());
      CHECK(max_abs(b.zv) <= 1e-11 * max_abs(a0));
    }
  }
}

TEST_CASE("jump Gram matrix against Simpson quadrature of the traces") {
  const Mesh m = test::lshape_mixed(1);
  const SplitLayout layout(m);
  const JumpGram sd = assemble_S_D(m);
  const Index nf = static_cast<Index>(layout.z_faces().size());
  REQUIRE(sd.S.rows() == nf);
  REQUIRE(sd.D.size() == nf);

  // x-component jumps of every scalar Z basis function at three points per face
  std::vector<Eigen::MatrixXd> jumps;
  for (Index i = 0; i < nf; ++i) {
    Vector z = Vector::Zero(layout.nz());
    z(2 * i) = 1.0;
    const Vector u = recombine(m, layout, {z, Vector::Zero(layout.nv())});
    Eigen::MatrixXd j(m.num_faces(), 3);
    for (Index f = 0; f < m.num_faces(); ++f) {
      const Point a = m.vertex(m.face(f).vertices[0]), b = m.vertex(m.face(f).vertices[1]);
      for (int k = 0; k < 3; ++k) j(f, k) = trace_at(m, u, f, a + 0.5 * k * (b - a), Trace::Jump).x();
    }
    jumps.push_back(j);
  }
  const Eigen::MatrixXd s = test::dense(sd.S);
  double worst = 0.0;
  for (Index i = 0; i < nf; ++i)
    for (Index k = 0; k < nf; ++k) {
      double ref = 0.0;
      for (Index f = 0; f < m.num_faces(); ++f) {
        if (m.face(f).kind == FaceKind::Neumann) continue;
        const auto& a = jumps[static_cast<std::size_t>(i)];
        const auto& b = jumps[static_cast<std::size_t>(k)];
        const double simpson = (a(f, 0) * b(f, 0) + 4.0 * a(f, 1) * b(f, 1) + a(f, 2) * b(f, 2)) / 6.0;
        ref += simpson;  // |E| / h_E = 1
      }
      worst = std::max(worst, std::abs(s(i, k) - ref));
    }
  CHECK(worst <= 1e-13);
  CHECK((sd.D.array() - 1.0).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("load vector integrates constant data") {
  const Mesh m = refine(classify_boundary(lshape_coarse(), sides_predicate({"y=0"})), 2);
  const MaterialField mat = MaterialField::uniform(m, 1.0, 0.3);
  LoadSpec load;
  load.body_force = [](const Point&) { return Eigen::Vector2d(2.0, -1.0); };
  load.traction = [](const Point&, const Eigen::Vector2d& n) { return Eigen::Vector2d(-3.0 * n.y(), 0.0); };
  const Vector f = assemble_rhs(m, mat, load);
  const Vector ex = interpolate_linear(m, Eigen::Matrix2d::Zero(), {1.0, 0.0});
  const Vector ey = interpolate_linear(m, Eigen::Matrix2d::Zero(), {0.0, 1.0});
  // area 0.75; Neumann side y=0 has length 1 and outward normal (0,-1)
  CHECK(f.dot(ex) == doctest::Approx(2.0 * 0.75 + 3.0));
  CHECK(f.dot(ey) == doctest::Approx(-1.0 * 0.75));
}
