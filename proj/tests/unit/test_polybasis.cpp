#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wgdc/analysis.hpp"
#include "wgdc/assembly.hpp"
#include "wgdc/discretization.hpp"
#include "wgdc/polybasis.hpp"
#include "wgdc/projection.hpp"

namespace wgdc {
namespace {

using std::numbers::pi;

double cell_l2_error(const PolyMesh& m, int c, int degree, const Eigen::VectorXd& coeffs,
                     const PointFunction& f, int quad) {
  const CellBasis basis = make_cell_basis(m, c, degree);
  const QuadRule r = cell_quadrature(m, c, quad);
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) {
    const double e = basis.eval(r.points[q]).dot(coeffs) - f(r.points[q]);
    s += r.weights[q] * e * e;
  }
  return s;
}

TEST(Dimensions, MatchBinomials) {
  for (int k = 0; k <= 6; ++k) {
    EXPECT_EQ(dim_cell(k), static_cast<int>(monomial_exponents3(k).size()));
    EXPECT_EQ(dim_face(k), static_cast<int>(monomial_exponents2(k).size()));
  }
  EXPECT_EQ(dim_cell(-1), 0);
  const auto& e = monomial_exponents3(3);
  for (std::size_t i = 1; i < e.size(); ++i)
    EXPECT_LE(e[i - 1][0] + e[i - 1][1] + e[i - 1][2], e[i][0] + e[i][1] + e[i][2]);
}

TEST(CellBasis, DerivativeMatrixIsExact) {
  const PolyMesh m = build_cube_tet_mesh(1);
  const CellBasis b = make_cell_basis(m, 2, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1, 1);
  Eigen::VectorXd c(b.size());
  for (int i = 0; i < c.size(); ++i) c[i] = d(rng);
  const Vec3 x(0.3, 0.2, 0.6);
  const Eigen::Matrix<double, Eigen::Dynamic, 3> G = b.grad(x);
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd dc = b.derivative_matrix(axis, 3, 2) * c;
    const CellBasis low(b.center(), b.scale(), 2);
    EXPECT_NEAR(low.eval(x).dot(dc), G.col(axis).dot(c), 1e-12);
  }
}

TEST(CellProjection, ReproducesLinearField) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const PointFunction f = [](const Vec3& x) { return x[0]; };
  const Eigen::VectorXd c = l2_project_cell(f, m, 0, 1);
  EXPECT_LE(std::sqrt(cell_l2_error(m, 0, 1, c, f, 4)), 1e-13);
}

TEST(CellProjection, MeanOfSquare) {
  const PolyMesh m = build_cube_hex_mesh(1);
  const Eigen::VectorXd c = l2_project_cell([](const Vec3& x) { return x[0] * x[0]; }, m, 0, 0);
  ASSERT_EQ(c.size(), 1);
  EXPECT_NEAR(c[0], 1.0 / 3.0, 1e-14);
}

TEST(CellProjection, ReproducesPolynomialsOnTets) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 3; ++k) {
    const test::RandomPolyField u(k, rng);
    const PointFunction f = [&](const Vec3& x) { return u(x)[1]; };
    for (int c = 0; c < m.num_cells(); c += 7) {
      const Eigen::VectorXd coeffs = l2_project_cell(f, m, c, k);
      EXPECT_LE(std::sqrt(cell_l2_error(m, c, k, coeffs, f, 2 * k + 2)), 1e-12);
    }
  }
}

TEST(CellProjection, IdempotentAndOrthogonal) {
  const PolyMesh m = build_cube_tet_mesh(2);
  const PointFunction f = [](const Vec3& x) { return std::sin(pi * x[0]) * std::exp(x[1] - x[2]); };
  for (int c = 0; c < m.num_cells(); c += 5) {
    const int k = 2;
    const CellBasis basis = make_cell_basis(m, c, k);
    const Eigen::VectorXd p1 = l2_project_cell(f, m, c, k, 2 * k + 3);
    const PointFunction g = [&](const Vec3& x) { return basis.eval(x).dot(p1); };
    const Eigen::VectorXd p2 = l2_project_cell(g, m, c, k, 2 * k + 3);
    const Eigen::MatrixXd M = mass_matrix(basis, cell_quadrature(m, c, 2 * k));
    const Eigen::VectorXd diff = p2 - p1;
    EXPECT_LE(std::sqrt(diff.dot(M * diff)), 1e-13 * std::sqrt(p1.dot(M * p1)));

    const QuadRule r = cell_quadrature(m, c, 2 * k + 3);
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis.size());
    Eigen::VectorXd scale = Eigen::VectorXd::Zero(basis.size());
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Eigen::VectorXd phi = basis.eval(r.points[q]);
      moments += r.weights[q] * (f(r.points[q]) - phi.dot(p1)) * phi;
      scale += r.weights[q] * std::abs(f(r.points[q])) * phi.cwiseAbs();
    }
    for (int i = 0; i < basis.size(); ++i) EXPECT_LE(std::abs(moments[i]), 1e-12 * scale[i]);
  }
}

TEST(CellProjection, SecondOrderForLinears) {
  const PointFunction f = [](const Vec3& x) { return std::sin(pi * x[0]); };
  std::vector<std::pair<double, double>> pairs;
  for (int n : {2, 4, 8}) {
    const PolyMesh m = build_cube_hex_mesh(n);
    double err = 0.0;
    for (int c = 0; c < m.num_cells(); ++c)
      err += cell_l2_error(m, c, 1, l2_project_cell(f, m, c, 1, 5), f, 8);
    pairs.emplace_back(m.h(), std::sqrt(err));
  }
  EXPECT_NEAR(convergence_rate(pairs), 2.0, 0.1);
}

TEST(FaceProjection, ConstantAndLinear) {
  const PolyMesh m = build_cube_tet_mesh(1);
  for (int f = 0; f < m.num_faces(); f += 3) {
    const FaceBasis b = make_face_basis(m, f, 1);
    const Eigen::VectorXd c0 = l2_project_face([](const Vec3&) { return 2.5; }, m, f, 1);
    EXPECT_NEAR(c0[0], 2.5, 1e-14);
    EXPECT_NEAR(c0.tail(2).norm(), 0.0, 1e-13);
    const PointFunction lin = [](const Vec3& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]; };
    const Eigen::VectorXd c1 = l2_project_face(lin, m, f, 1);
    const QuadRule r = face_quadrature(m, f, 4);
    for (std::size_t q = 0; q < r.size(); ++q)
      EXPECT_NEAR(b.eval(r.points[q]).dot(c1), lin(r.points[q]), 1e-13);
  }
}

TEST(FaceProjection, MeanOfSquaredInPlaneCoordinate) {
  const PolyMesh m = build_cube_hex_mesh(1);
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& F = m.face(f);
    const PointFunction xi2 = [&](const Vec3& x) {
      const double xi = (x - F.centroid).dot(F.frame.t1);
      return xi * xi;
    };
    const Eigen::VectorXd c = l2_project_face(xi2, m, f, 0);
    ASSERT_EQ(c.size(), 1);
    EXPECT_NEAR(c[0], 1.0 / 12.0, 1e-14);
  }
}

TEST(ProjectQh, ConstantWithScaledMu) {
  const PolyMesh m = build_cube_tet_mesh(1);
  const Discretization disc(m, 1, test::uniform_materials(m, 2.0 * Mat3::Identity()));
  const Vec3 c(0.4, -1.0, 2.0);
  const WeakFunction v = project_Qh(disc, [&](const Vec3&, int) { return c; });
  for (int f = 0; f < m.num_faces(); ++f) {
    const Vec3 n = m.face(f).normal;
    const Vec3 expected = 2.0 * c.dot(n) * n + (c - c.dot(n) * n);
    EXPECT_LE((disc.eval_face(v, f, m.face(f).centroid) - expected).norm(), 1e-13);
  }
  for (int cell = 0; cell < m.num_cells(); ++cell)
    EXPECT_LE((disc.eval_interior(v, cell, m.cell(cell).centroid) - c).norm(), 1e-13);
}

TEST(ProjectQh, PolynomialTraceAndZeroStabilizer) {
  const PolyMesh m = build_cube_tet_mesh(2);
  std::mt19937_64 rng(21);
  for (int k = 1; k <= 2; ++k) {
    const Discretization disc(m, k, test::uniform_materials(m));
    const test::RandomPolyField u(k, rng);
    const WeakFunction v = project_Qh(disc, [&](const Vec3& x, int) { return u(x); });
    for (int f = 0; f < m.num_faces(); f += 11) {
      const QuadRule r = face_quadrature(m, f, 2);
      for (const Vec3& x : r.points) EXPECT_LE((disc.eval_face(v, f, x) - u(x)).norm(), 1e-12);
    }
    EXPECT_LE(std::abs(stabilizer(disc, v, v)), 1e-22);
  }
}

TEST(ProjectQh, FaceDataConvergesToTrace) {
  const auto u = [](const Vec3& x, int) {
    return Vec3(std::sin(pi * x[1]), std::cos(pi * x[2]) * x[0], std::sin(pi * x[0] * x[1]));
  };
  std::vector<std::pair<double, double>> pairs;
  for (int n : {2, 4, 8}) {
    const PolyMesh m = build_cube_hex_mesh(n);
    const Discretization disc(m, 1, test::uniform_materials(m));
    const WeakFunction v = project_Qh(disc, u);
    double err = 0.0;
    for (int c = 0; c < m.num_cells(); ++c)
      for (const auto& cf : m.cell(c).faces) {
        const QuadRule r = face_quadrature(m, cf.face, 8);
        for (std::size_t q = 0; q < r.size(); ++q)
          err += m.cell(c).diameter * r.weights[q] *
                 (disc.eval_face(v, cf.face, r.points[q]) - u(r.points[q], 0)).squaredNorm();
      }
    pairs.emplace_back(m.h(), std::sqrt(err));
  }
  EXPECT_GT(convergence_rate(pairs), 1.9);
}

}  // namespace
}  // namespace wgdc
