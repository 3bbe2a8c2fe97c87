#include <gtest/gtest.h>

#include "support.hpp"
#include "wgdc/discretization.hpp"
#include "wgdc/projection.hpp"
#include "wgdc/weakops.hpp"

namespace wgdc {
namespace {

Vec3 local_normal(const PolyMesh& m, const CellFace& cf) { return cf.sign * m.face(cf.face).normal; }

TEST(WeakDivergence, PositionFieldGivesThree) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m));
  const WeakFunction v = project_Qh(disc, [](const Vec3& x, int) { return x; });
  const Eigen::VectorXd d = weak_divergence(disc.local(0), disc.gather(v, 0));
  ASSERT_EQ(d.size(), 1);
  EXPECT_NEAR(d[0], 3.0, 1e-13);
}

TEST(WeakDivergence, OutwardNormalTraceGivesSix) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m));
  WeakFunction v = disc.zero_function();
  for (const auto& cf : m.cell(0).faces) v.face(cf.face, 0)[0] = cf.sign;
  const Eigen::VectorXd d = weak_divergence(disc.local(0), disc.gather(v, 0));
  EXPECT_NEAR(d[0], 6.0, 1e-13);
}

TEST(WeakOperators, ConstantFieldsAnnihilated) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(4);
  const Discretization disc(m, 2, test::uniform_materials(m, test::random_spd(rng)));
  const Vec3 c(1.5, -0.25, 0.75);
  const WeakFunction v = project_Qh(disc, [&](const Vec3&, int) { return c; });
  for (int cell = 0; cell < m.num_cells(); ++cell) {
    const Eigen::VectorXd loc = disc.gather(v, cell);
    EXPECT_LE(weak_divergence(disc.local(cell), loc).norm(), 1e-12 * (1.0 + loc.norm()));
    EXPECT_LE(weak_curl(disc.local(cell), loc).norm(), 1e-12 * (1.0 + loc.norm()));
  }
}

TEST(WeakCurl, SingleTangentialFace) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m));
  const CellFace cf = m.cell(0).faces[2];
  const Face& F = m.face(cf.face);
  WeakFunction v = disc.zero_function();
  v.face(cf.face, 1)[0] = 1.0;  // v_b = t1 on this face only
  const Eigen::VectorXd w = weak_curl(disc.local(0), disc.gather(v, 0));
  ASSERT_EQ(w.size(), 3);

  // P_0 moment system: |T| w = -<t1 x n_T, 1>_e, evaluated at two quadrature degrees.
  for (int deg : {1, 5}) {
    const QuadRule r = face_quadrature(m, cf.face, deg);
    Vec3 rhs = Vec3::Zero();
    for (std::size_t q = 0; q < r.size(); ++q)
      rhs -= r.weights[q] * F.frame.t1.cross(local_normal(m, cf));
    const Vec3 expected = rhs / m.cell(0).volume;
    EXPECT_LE((w - expected).norm(), 1e-13);
  }
}

class Commutativity : public ::testing::TestWithParam<int> {};

TEST_P(Commutativity, ProjectionCommutesWithWeakOperators) {
  const int k = GetParam();
  std::mt19937_64 rng(100 + k);
  const Mat3 mu = test::random_spd(rng);
  for (const PolyMesh& m : {build_cube_tet_mesh(2), build_hollow_cube_mesh(3)}) {
    const Discretization disc(m, k, test::uniform_materials(m, mu));
    const test::RandomPolyField u(k + 1, rng);
    const WeakFunction v = project_Qh(disc, [&](const Vec3& x, int) { return u(x); });
    for (int c = 0; c < m.num_cells(); ++c) {
      const Eigen::VectorXd loc = disc.gather(v, c);
      const Eigen::VectorXd div = weak_divergence(disc.local(c), loc);
      const Eigen::VectorXd div_ref = project_scalar_low(
          disc, c, [&](const Vec3& x, int) { return (mu * u.jacobian(x)).trace(); });
      EXPECT_LE((div - div_ref).norm(), 1e-11 * (1.0 + div_ref.norm())) << "cell " << c;
      const Eigen::VectorXd curl = weak_curl(disc.local(c), loc);
      const Eigen::VectorXd curl_ref =
          project_vector_low(disc, c, [&](const Vec3& x, int) { return u.curl(x); });
      EXPECT_LE((curl - curl_ref).norm(), 1e-11 * (1.0 + curl_ref.norm())) << "cell " << c;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Degrees, Commutativity, ::testing::Values(1, 2, 3));

TEST(WeakOperators, MatrixMatchesDirectMomentAssembly) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(8);
  const int k = 2;
  const Mat3 mu = test::random_spd(rng);
  const Discretization disc(m, k, test::uniform_materials(m, mu));
  const WeakFunction v = test::random_weak(disc, rng);
  for (int c : {0, 13, 47}) {
    const CellBasis low(disc.cell_basis(c).center(), disc.cell_basis(c).scale(), k - 1);
    const int n = low.size();
    Eigen::VectorXd div_m = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd curl_m = Eigen::VectorXd::Zero(3 * n);
    const QuadRule cr = cell_quadrature(m, c, 2 * k);
    for (std::size_t q = 0; q < cr.size(); ++q) {
      const Vec3 v0 = disc.eval_interior(v, c, cr.points[q]);
      const Eigen::Matrix<double, Eigen::Dynamic, 3> G = low.grad(cr.points[q]);
      for (int j = 0; j < n; ++j) {
        const Vec3 g = G.row(j).transpose();
        div_m[j] -= cr.weights[q] * (mu * v0).dot(g);
        for (int i = 0; i < 3; ++i)  // curl(e_i psi_j) = grad psi_j x e_i
          curl_m[i * n + j] += cr.weights[q] * v0.dot(g.cross(Vec3::Unit(i)));
      }
    }
    for (const auto& cf : m.cell(c).faces) {
      const Vec3 nT = local_normal(m, cf);
      const QuadRule fr = face_quadrature(m, cf.face, 2 * k);
      for (std::size_t q = 0; q < fr.size(); ++q) {
        const Vec3 vb = disc.eval_face(v, cf.face, fr.points[q]);
        const Eigen::VectorXd psi = low.eval(fr.points[q]);
        div_m += fr.weights[q] * vb.dot(nT) * psi;
        const Vec3 t = vb.cross(nT);
        for (int i = 0; i < 3; ++i) curl_m.segment(i * n, n) -= fr.weights[q] * t[i] * psi;
      }
    }
    const Eigen::MatrixXd& M = disc.local(c).mass_low;
    const Eigen::VectorXd loc = disc.gather(v, c);
    const Eigen::VectorXd div = weak_divergence(disc.local(c), loc);
    const Eigen::VectorXd curl = weak_curl(disc.local(c), loc);
    EXPECT_LE((M * div - div_m).norm(), 1e-13 * (1.0 + div_m.norm()));
    for (int i = 0; i < 3; ++i)
      EXPECT_LE((M * curl.segment(i * n, n) - curl_m.segment(i * n, n)).norm(),
                1e-13 * (1.0 + curl_m.norm()));
  }
}

TEST(WeakOperators, Linear) {
  const PolyMesh m = build_cube_tet_mesh(1);
  std::mt19937_64 rng(9);
  const Discretization disc(m, 2, test::uniform_materials(m));
  const WeakFunction a = test::random_weak(disc, rng), b = test::random_weak(disc, rng);
  const WeakFunction comb = a * 2.0 + b;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& ops = disc.local(c);
    const Eigen::VectorXd lhs = weak_curl(ops, disc.gather(comb, c));
    const Eigen::VectorXd rhs =
        2.0 * weak_curl(ops, disc.gather(a, c)) + weak_curl(ops, disc.gather(b, c));
    EXPECT_LE((lhs - rhs).norm(), 1e-13 * (1.0 + rhs.norm()));
    const Eigen::VectorXd dl = weak_divergence(ops, disc.gather(comb, c));
    const Eigen::VectorXd dr =
        2.0 * weak_divergence(ops, disc.gather(a, c)) + weak_divergence(ops, disc.gather(b, c));
    EXPECT_LE((dl - dr).norm(), 1e-13 * (1.0 + dr.norm()));
  }
}

TEST(WeakOperators, LocalToCellFaces) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(10);
  const Discretization disc(m, 1, test::uniform_materials(m));
  WeakFunction v = test::random_weak(disc, rng);
  const int c = 0;
  const Eigen::VectorXd div0 = weak_divergence(disc.local(c), disc.gather(v, c));
  const Eigen::VectorXd curl0 = weak_curl(disc.local(c), disc.gather(v, c));
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& F = m.face(f);
    if (F.owner == c || F.neighbor == c) continue;
    v.face(f).setConstant(42.0);
  }
  for (int other = 1; other < m.num_cells(); ++other) v.interior(other).setConstant(-7.0);
  EXPECT_EQ(weak_divergence(disc.local(c), disc.gather(v, c)), div0);
  EXPECT_EQ(weak_curl(disc.local(c), disc.gather(v, c)), curl0);
}

TEST(LocalOperators, Shapes) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 2, test::uniform_materials(m));
  const LocalOperators& ops = disc.local(0);
  EXPECT_EQ(ops.num_local, 3 * dim_cell(2) + 6 * 3 * dim_face(2));
  EXPECT_EQ(ops.div.rows(), dim_cell(1));
  EXPECT_EQ(ops.curl.rows(), 3 * dim_cell(1));
  EXPECT_EQ(ops.a_form, ops.a_form.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.a_form);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * es.eigenvalues().maxCoeff());
}

}  // namespace
}  // namespace wgdc
