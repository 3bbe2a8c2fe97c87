#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "wgdc/assembly.hpp"
#include "wgdc/errors.hpp"
#include "wgdc/projection.hpp"
#include "wgdc/solver.hpp"

namespace wgdc {
namespace {

using std::numbers::pi;

Eigen::VectorXd free_part(const SaddleSystem& sys, const WeakFunction& v) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.dofs.size());
  for (int i = 0; i < sys.dofs.num_free_u(); ++i) x[i] = v.coeffs()[sys.dofs.global_index(i)];
  return x;
}

double max_asymmetry(const Eigen::SparseMatrix<double>& M) {
  const Eigen::SparseMatrix<double> D = M - Eigen::SparseMatrix<double>(M.transpose());
  double worst = 0.0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

ProblemData smooth_data(int m) {
  ProblemData d;
  d.g = [](const Vec3& x, int) { return Vec3(std::sin(pi * x[1]), x[0] * x[2], 1.0); };
  d.f = [](const Vec3& x, int) { return std::cos(pi * x[0]) - 0.3; };
  d.boundary_trace = [](const Vec3& x, int) { return Vec3(x[1], -x[0], x[2] * x[2]); };
  d.beta.assign(m, 0.25);
  return d;
}

TEST(DofMap, SingleCubeCellCount) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m));
  const SaddleSystem sys = assemble(disc, {});
  EXPECT_EQ(sys.dofs.num_free_u(), 30);
  EXPECT_EQ(sys.dofs.num_p(), 1);
  EXPECT_EQ(sys.dofs.num_lambda(), 0);
  EXPECT_EQ(sys.matrix.rows(), 31);
  EXPECT_EQ(sys.matrix.cols(), 31);
  EXPECT_EQ(max_asymmetry(sys.matrix), 0.0);
}

TEST(DofMap, FixesExactlyBoundaryTangentialBlocks) {
  const PolyMesh m = build_hollow_cube_mesh(3);
  const Discretization disc(m, 2, test::uniform_materials(m));
  const DofMap dofs(disc);
  const SpaceLayout& L = disc.layout();
  int fixed = 0;
  for (int f = 0; f < m.num_faces(); ++f)
    for (int b = 0; b < 3; ++b)
      for (int i = 0; i < L.face_dim(); ++i) {
        const int g = L.face_offset(f) + b * L.face_dim() + i;
        const bool expect = m.face(f).is_boundary() && b > 0;
        EXPECT_EQ(dofs.is_fixed(g), expect);
        fixed += expect;
      }
  EXPECT_EQ(dofs.num_free_u() + fixed, L.size());
  EXPECT_EQ(dofs.num_lambda(), 1);
  EXPECT_EQ(dofs.size(), dofs.num_free_u() + L.pressure_size() + 1);
}

TEST(Assembly, SymmetricOnEveryMesh) {
  for (const PolyMesh& m : {build_cube_tet_mesh(2), build_hollow_cube_mesh(3)}) {
    std::mt19937_64 rng(3);
    const Discretization disc(m, 2, test::uniform_materials(m, test::random_spd(rng), test::random_spd(rng)));
    const SaddleSystem sys = assemble(disc, smooth_data(m.m()));
    EXPECT_EQ(max_asymmetry(sys.matrix), 0.0);
  }
}

TEST(Assembly, HomogeneousDataGivesZeroSolution) {
  for (const PolyMesh& m :
       {build_cube_hex_mesh(1), build_cube_tet_mesh(2), build_hollow_cube_mesh(3)}) {
    const Discretization disc(m, 1, test::uniform_materials(m));
    ProblemData data;
    data.beta.assign(m.m(), 0.0);
    const SaddleSystem sys = assemble(disc, data);
    EXPECT_EQ(sys.rhs.norm(), 0.0);
    const Solution sol = solve(sys);
    EXPECT_LE(sol.u.coeffs().norm() + sol.p.coeffs().norm(), 1e-10);
  }
}

TEST(Assembly, EliminationOnlyChangesRightHandSide) {
  const PolyMesh m = build_hollow_cube_mesh(3);
  const Discretization disc(m, 1, test::uniform_materials(m));
  ProblemData zero;
  zero.beta.assign(1, 0.0);
  const SaddleSystem a = assemble(disc, zero);
  const SaddleSystem b = assemble(disc, smooth_data(1));
  EXPECT_EQ((Eigen::SparseMatrix<double>(a.matrix - b.matrix)).norm(), 0.0);
  EXPECT_GT((a.rhs - b.rhs).norm(), 0.0);
  EXPECT_EQ(a.fixed_values.norm(), 0.0);
  EXPECT_GT(b.fixed_values.norm(), 0.0);
  for (int g = 0; g < disc.layout().size(); ++g)
    if (!b.dofs.is_fixed(g)) EXPECT_EQ(b.fixed_values[g], 0.0);
}

TEST(Assembly, FixedValuesAreProjectedTangentialTrace) {
  const PolyMesh m = build_cube_tet_mesh(2);
  const Discretization disc(m, 1, test::uniform_materials(m));
  const ProblemData data = smooth_data(0);
  const SaddleSystem sys = assemble(disc, data);
  const Solution sol = solve(sys);
  const SpaceLayout& L = disc.layout();
  for (int f = 0; f < m.num_faces(); ++f) {
    if (!m.face(f).is_boundary()) continue;
    const Eigen::VectorXd expect = boundary_tangential_values(disc, f, data.boundary_trace);
    EXPECT_LE((sol.u.face(f).tail(2 * L.face_dim()) - expect).norm(), 1e-14);
  }
}

TEST(Assembly, MatrixMatchesBilinearForms) {
  const PolyMesh m = build_hollow_cube_mesh(3);
  std::mt19937_64 rng(12);
  const Discretization disc(m, 2, test::uniform_materials(m, test::random_spd(rng), test::random_spd(rng)));
  const SaddleSystem sys = assemble(disc, {.beta = {0.0}});
  WeakFunction v = test::random_weak(disc, rng), w = test::random_weak(disc, rng);
  test::clear_boundary_tangential(disc, v);
  test::clear_boundary_tangential(disc, w);
  const PressureFunction q = test::random_pressure(disc, rng);
  const Eigen::VectorXd xv = free_part(sys, v), xw = free_part(sys, w);
  const double a_mat = xv.dot(sys.matrix * xw);
  const double a_ref = apply_a(disc, v, w);
  EXPECT_NEAR(a_mat, a_ref, 1e-12 * std::abs(a_ref));

  Eigen::VectorXd xq = Eigen::VectorXd::Zero(sys.dofs.size());
  xq.segment(sys.dofs.pressure_offset(), q.coeffs().size()) = q.coeffs();
  const double b_mat = xq.dot(sys.matrix * xv);
  const double b_ref = apply_b(disc, v, q);
  EXPECT_NEAR(b_mat, b_ref, 1e-12 * std::abs(b_ref));

  Eigen::VectorXd xl = Eigen::VectorXd::Zero(sys.dofs.size());
  xl[sys.dofs.lambda_offset()] = 1.0;
  EXPECT_NEAR(xl.dot(sys.matrix * xv), boundary_flux(disc, v, 1), 1e-12);
}

TEST(Forms, SymmetryAndPositivity) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(6);
  const Discretization disc(m, 1, test::uniform_materials(m, test::random_spd(rng), test::random_spd(rng)));
  for (int trial = 0; trial < 5; ++trial) {
    const WeakFunction v = test::random_weak(disc, rng), w = test::random_weak(disc, rng);
    EXPECT_NEAR(stabilizer(disc, v, w), stabilizer(disc, w, v), 1e-12);
    EXPECT_NEAR(apply_a(disc, v, w), apply_a(disc, w, v), 1e-12);
    EXPECT_GE(apply_a(disc, v, v), 0.0);
    EXPECT_GE(stabilizer(disc, v, v), 0.0);
  }
}

TEST(Stabilizer, SingleNormalFace) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m));
  WeakFunction v = disc.zero_function();
  v.face(0, 0)[0] = 1.0;
  // Face-quadrature evaluation of h^{-1} <|v_b . n|^2, 1>.
  const QuadRule r = face_quadrature(m, 0, 3);
  double brute = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q)
    brute += r.weights[q] * std::pow(disc.eval_face(v, 0, r.points[q]).dot(m.face(0).normal), 2);
  brute /= m.cell(0).diameter;
  EXPECT_NEAR(brute, 1.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(stabilizer(disc, v, v), brute, 1e-14);
}

TEST(Forms, EnergyOfProjectedPolynomial) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(19);
  const Mat3 kappa = test::random_spd(rng);
  for (int k = 1; k <= 2; ++k) {
    const Discretization disc(m, k, test::uniform_materials(m, test::random_spd(rng), kappa));
    const test::RandomPolyField u(k, rng);
    const WeakFunction v = project_Qh(disc, [&](const Vec3& x, int) { return u(x); });
    double ref = 0.0;
    const int n = dim_cell(k - 1);
    for (int c = 0; c < m.num_cells(); ++c) {
      const Eigen::VectorXd pc = project_vector_low(disc, c, [&](const Vec3& x, int) { return u.curl(x); });
      const Eigen::MatrixXd& M = disc.local(c).mass_low;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ref += kappa(i, j) * pc.segment(i * n, n).dot(M * pc.segment(j * n, n));
    }
    EXPECT_NEAR(apply_a(disc, v, v), ref, 1e-11 * (1.0 + ref));
  }
}

TEST(Assembly, RejectsBetaMismatch) {
  const PolyMesh m = build_hollow_cube_mesh(3);
  const Discretization disc(m, 1, test::uniform_materials(m));
  EXPECT_THROW(assemble(disc, {}), InputError);
  EXPECT_THROW(assemble(disc, {.beta = {1.0, 2.0}}), InputError);
}

TEST(Assembly, CoordinateDumpAndLayout) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m));
  const SaddleSystem sys = assemble(disc, {});
  std::ostringstream out;
  sys.write_coordinates(out);
  std::istringstream in(out.str());
  long count = 0;
  int i = 0, j = 0;
  double value = 0.0;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(31, 31);
  while (in >> i >> j >> value) {
    dense(i, j) = value;
    ++count;
  }
  EXPECT_EQ(count, sys.matrix.nonZeros());
  EXPECT_EQ((dense - Eigen::MatrixXd(sys.matrix)).norm(), 0.0);
  const std::string layout = sys.block_layout();
  EXPECT_NE(layout.find("velocity 0 30"), std::string::npos) << layout;
  EXPECT_NE(layout.find("pressure 30 31"), std::string::npos) << layout;
}

}  // namespace
}  // namespace wgdc
