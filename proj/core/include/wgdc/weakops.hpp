#pragma once

#include <vector>

#include <Eigen/Core>

#include "wgdc/mesh.hpp"
#include "wgdc/polybasis.hpp"
#include "wgdc/quadrature.hpp"

namespace wgdc {

/// Element matrices acting on the local DoF vector of one cell:
///   [v_0 (x, y, z components in the cell basis) | v_b on face 0 (n, t1, t2) | face 1 | ...]
/// with faces in the order the cell lists them. Weak operators take values in P_{k-1}.
struct LocalOperators {
  int degree = 1;
  int num_local = 0;
  double h = 0.0;
  Mat3 mu = Mat3::Identity();
  Mat3 kappa = Mat3::Identity();

  Eigen::MatrixXd mass;      // Gram matrix of P_k(T)
  Eigen::MatrixXd mass_low;  // Gram matrix of P_{k-1}(T)

  Eigen::MatrixXd div_moments;  // rows: (div_w(mu v), phi_j)_T
  Eigen::MatrixXd div;          // coefficients of div_w(mu v)
  Eigen::MatrixXd curl;         // coefficients of curl_w v, component-major
  Eigen::MatrixXd stab;         // local stabilizer s_T
  Eigen::MatrixXd stab_rows;    // weighted residual rows R with stab = R^T R
  Eigen::MatrixXd curl_energy;  // (kappa curl_w v, curl_w w)_T
  Eigen::MatrixXd curl_l2;      // (curl_w v, curl_w w)_T
  Eigen::MatrixXd div_l2;       // (div_w(mu v), div_w(mu w))_T
  Eigen::MatrixXd a_form;       // curl_energy + stab
};

/// Builds every element matrix of one cell. All integrals use `cell_rule` and
/// `face_rules`, which must be exact to degree 2k. Throws NumericError if a
/// Gram matrix is singular.
LocalOperators build_local_operators(const PolyMesh& mesh, int cell, int degree, const Mat3& mu,
                                     const Mat3& kappa, const CellBasis& cell_basis,
                                     const QuadRule& cell_rule,
                                     const std::vector<FaceBasis>& face_bases,
                                     const std::vector<QuadRule>& face_rules);

/// Coefficients of div_w(mu v) in P_{k-1}(T) for a local DoF vector.
Eigen::VectorXd weak_divergence(const LocalOperators& ops, const Eigen::VectorXd& v_local);
/// Coefficients of curl_w v in [P_{k-1}(T)]^3 for a local DoF vector.
Eigen::VectorXd weak_curl(const LocalOperators& ops, const Eigen::VectorXd& v_local);

}  // namespace wgdc
