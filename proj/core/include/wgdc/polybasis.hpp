#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "wgdc/mesh.hpp"
#include "wgdc/quadrature.hpp"

namespace wgdc {

/// Dimension of P_k in three variables; zero for k < 0.
constexpr int dim_cell(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) * (k + 3) / 6; }
/// Dimension of P_k in two variables; zero for k < 0.
constexpr int dim_face(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Exponents of all monomials of total degree <= k, graded (degree-major), so
/// the first dim_cell(k-1) entries span P_{k-1}.
const std::vector<std::array<int, 3>>& monomial_exponents3(int k);
const std::vector<std::array<int, 2>>& monomial_exponents2(int k);

/// Scaled monomials ((x - center) / scale)^alpha on a cell.
class CellBasis {
 public:
  CellBasis() = default;
  CellBasis(const Vec3& center, double scale, int degree);

  int degree() const { return degree_; }
  int size() const { return dim_cell(degree_); }
  const Vec3& center() const { return center_; }
  double scale() const { return scale_; }

  Eigen::VectorXd eval(const Vec3& x) const;
  /// Row i holds the gradient of basis function i.
  Eigen::Matrix<double, Eigen::Dynamic, 3> grad(const Vec3& x) const;

  /// Maps coefficients of q in P_{from} to coefficients of d q / d x_axis in
  /// P_{to} (to >= from - 1). Exact: differentiation lowers the degree.
  Eigen::MatrixXd derivative_matrix(int axis, int from, int to) const;

 private:
  Vec3 center_ = Vec3::Zero();
  double scale_ = 1.0;
  int degree_ = 0;
};

/// Scaled monomials in in-plane coordinates ((x - c).t1, (x - c).t2) / scale.
class FaceBasis {
 public:
  FaceBasis() = default;
  FaceBasis(const Vec3& center, const Vec3& t1, const Vec3& t2, double scale, int degree);

  int degree() const { return degree_; }
  int size() const { return dim_face(degree_); }
  Eigen::VectorXd eval(const Vec3& x) const;

 private:
  Vec3 center_ = Vec3::Zero();
  Vec3 t1_ = Vec3::UnitX();
  Vec3 t2_ = Vec3::UnitY();
  double scale_ = 1.0;
  int degree_ = 0;
};

CellBasis make_cell_basis(const PolyMesh& mesh, int cell, int degree);
FaceBasis make_face_basis(const PolyMesh& mesh, int face, int degree);

/// Gram matrix of the basis under the rule.
template <class Basis>
Eigen::MatrixXd mass_matrix(const Basis& basis, const QuadRule& rule) {
  const int n = basis.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd v = basis.eval(rule.points[q]);
    M.noalias() += rule.weights[q] * v * v.transpose();
  }
  return 0.5 * (M + M.transpose());
}

using PointFunction = std::function<double(const Vec3&)>;

/// Coefficients of the L2 projection of `field` onto the first `dim` basis
/// functions (dim <= basis.size()). Throws NumericError on a singular Gram matrix.
template <class Basis>
Eigen::VectorXd l2_project(const PointFunction& field, const Basis& basis, const QuadRule& rule,
                           int dim = -1);

/// Cell projection onto P_{degree} (Q_0 componentwise, and the pressure projection).
Eigen::VectorXd l2_project_cell(const PointFunction& field, const PolyMesh& mesh, int cell,
                                int degree, int quad_degree = -1);
/// Face projection onto P_{degree}(e) (Q_b per scalar component).
Eigen::VectorXd l2_project_face(const PointFunction& field, const PolyMesh& mesh, int face,
                                int degree, int quad_degree = -1);

}  // namespace wgdc
