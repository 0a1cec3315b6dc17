#include "helpers.hpp"

#include "edg/dgspace.hpp"

#include <doctest.h>

#include <random>

using namespace edg;

namespace {

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  return Vector::NullaryExpr(n, [&]() { return normal(rng); });
}

/// Nodal interpolant of x -> G x + c: the value at each local face midpoint.
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

}  // namespace

TEST_CASE("DG space dimensions") {
  CHECK(build_dofmap(unit_square_coarse()).dim() == 48);
  CHECK(build_dofmap(lshape_coarse()).dim() == 24);
  const Mesh m = test::lshape_mixed(3);
  const SplitLayout layout(m);
  CHECK(layout.dim() == build_dofmap(m).dim());
  CHECK(layout.nz() == 2 * (m.count(FaceKind::Interior) + m.count(FaceKind::Dirichlet)));
  CHECK(layout.nv() == 2 * (m.count(FaceKind::Interior) + m.count(FaceKind::Neumann)));
}

TEST_CASE("nodal shape functions are cardinal and reproduce linears") {
  const Mesh m = refine(unit_square_coarse(), 1);
  for (Index t = 0; t < m.num_triangles(); ++t) {
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector3d v = nodal_shape_values(m, t, m.face(m.element_face(t, j)).midpoint);
      for (int i = 0; i < 3; ++i) CHECK(v(i) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
    const auto& tv = m.triangle(t).vertices;
    const Point x = 0.2 * m.vertex(tv[0]) + 0.5 * m.vertex(tv[1]) + 0.3 * m.vertex(tv[2]);
    CHECK(nodal_shape_values(m, t, x).sum() == doctest::Approx(1.0));
    CHECK(nodal_shape_gradients(m, t).rowwise().sum().norm() < 1e-12);
  }

  Eigen::Matrix2d g;
  g << 1.5, -0.25, 0.75, 2.0;
  const Eigen::Vector2d c(0.3, -0.1);
  const Vector u = interpolate_linear(m, g, c);
  const Point x(0.37, 0.61);
  for (Index t = 0; t < m.num_triangles(); ++t) CHECK((evaluate(m, u, t, x) - (g * x + c)).norm() < 1e-12);
}

TEST_CASE("split and recombine are inverse") {
  for (const Mesh& m : {test::lshape_mixed(2), refine(unit_square_coarse(), 2), test::pure_neumann(refine(lshape_coarse(), 1))}) {
    const SplitLayout layout(m);
    const Vector u = random_vector(layout.dim(), 7);
    CHECK((recombine(m, layout, split(m, layout, u)) - u).lpNorm<Eigen::Infinity>() <= 1e-13);
    const Vector s = random_vector(layout.dim(), 8);
    CHECK((split(m, layout, recombine(m, layout, SplitVector::unstack(s, layout.nz()))).stacked() - s)
              .lpNorm<Eigen::Infinity>() <= 1e-13);
  }
}

TEST_CASE("basis change matrix agrees with recombine") {
  const Mesh m = test::lshape_mixed(1);
  const SplitLayout layout(m);
  const SparseMatrix q = basis_change_matrix(m, layout);
  const Vector s = random_vector(layout.dim(), 3);
  CHECK((q * s - recombine(m, layout, SplitVector::unstack(s, layout.nz()))).norm() < 1e-13);
  for (Index c = 0; c < q.outerSize(); ++c) {
    int count = 0;
    for (SparseMatrix::InnerIterator it(q, c); it; ++it) {
      ++count;
      const double a = std::abs(it.value());
      CHECK((a == 1.0 || a == 0.5));
    }
    CHECK(count <= 2);
  }
}

TEST_CASE("continuous linear fields have no Z component on interior faces") {
  const Mesh m = test::lshape_mixed(2);
  const SplitLayout layout(m);
  Eigen::Matrix2d g;
  g << 0.4, 1.1, -0.7, 0.2;
  const SplitVector s = split(m, layout, interpolate_linear(m, g, {1.0, 2.0}));
  for (Index f : layout.z_faces()) {
    if (!m.face(f).interior()) continue;
    const Index slot = layout.z_slot(f);
    CHECK(std::abs(s.z(2 * slot)) < 1e-13);
    CHECK(std::abs(s.z(2 * slot + 1)) < 1e-13);
  }
}

TEST_CASE("nodal scaling of the Z block") {
  const Mesh m = test::lshape_mixed(1);
  const SplitLayout layout(m);
  const Vector d = z_nodal_scaling(m, layout);
  REQUIRE(d.size() == layout.nz());
  for (Index f : layout.z_faces()) {
    const double expect = m.face(f).interior() ? 2.0 : 1.0;
    CHECK(d(2 * layout.z_slot(f)) == expect);
    CHECK(d(2 * layout.z_slot(f) + 1) == expect);
  }
}

TEST_CASE("jump-average product identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    worst = std::max(worst, product_identity_residual(u(rng), u(rng), u(rng), u(rng), [](double a, double b) { return a * b; }));
    const Eigen::Vector2d a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
    worst = std::max(worst, product_identity_residual(a, b, c, d, [](const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
                       return x.dot(y);
                     }));
  }
  CHECK(worst <= 1e-14);
}
