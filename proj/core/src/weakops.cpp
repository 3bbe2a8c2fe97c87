#include "wgdc/weakops.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "wgdc/errors.hpp"

namespace wgdc {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// (grad phi x e_d)_c for the test function phi e_d.
double curl_of_scaled_axis(const Eigen::RowVector3d& g, int d, int c) {
  Vec3 e = Vec3::Unit(d);
  return Vec3(g.transpose()).cross(e)[c];
}

}  // namespace

LocalOperators build_local_operators(const PolyMesh& mesh, int cell, int degree, const Mat3& mu,
                                     const Mat3& kappa, const CellBasis& cell_basis,
                                     const QuadRule& cell_rule,
                                     const std::vector<FaceBasis>& face_bases,
                                     const std::vector<QuadRule>& face_rules) {
  const Cell& T = mesh.cell(cell);
  const int nk = dim_cell(degree);
  const int nk1 = dim_cell(degree - 1);
  const int nf = dim_face(degree);
  const int n_int = 3 * nk;
  const int n_loc = n_int + static_cast<int>(T.faces.size()) * 3 * nf;

  LocalOperators ops;
  ops.degree = degree;
  ops.num_local = n_loc;
  ops.h = T.diameter;
  ops.mu = mu;
  ops.kappa = kappa;

  ops.mass = Eigen::MatrixXd::Zero(nk, nk);
  Eigen::MatrixXd Dm = Eigen::MatrixXd::Zero(nk1, n_loc);
  Eigen::MatrixXd Cm = Eigen::MatrixXd::Zero(3 * nk1, n_loc);

  for (std::size_t q = 0; q < cell_rule.size(); ++q) {
    const double w = cell_rule.weights[q];
    const Eigen::VectorXd psi = cell_basis.eval(cell_rule.points[q]);
    const Eigen::Matrix<double, Eigen::Dynamic, 3> grad = cell_basis.grad(cell_rule.points[q]);
    ops.mass.noalias() += w * psi * psi.transpose();
    for (int j = 0; j < nk1; ++j) {
      const Eigen::RowVector3d g = grad.row(j);
      const Vec3 mug = mu * g.transpose();
      for (int c = 0; c < 3; ++c) {
        // -(mu v_0, grad phi_j)
        Dm.row(j).segment(c * nk, nk) -= (w * mug[c]) * psi.transpose();
        // (v_0, curl(phi_j e_d))
        for (int d = 0; d < 3; ++d) {
          const double k = curl_of_scaled_axis(g, d, c);
          if (k != 0.0) Cm.row(d * nk1 + j).segment(c * nk, nk) += (w * k) * psi.transpose();
        }
      }
    }
  }
  ops.mass = symmetrized(ops.mass);
  ops.mass_low = ops.mass.topLeftCorner(nk1, nk1);

  int num_rows = 0;
  for (const CellFace& cf : T.faces) num_rows += 3 * static_cast<int>(face_rules[cf.face].size());
  ops.stab_rows = Eigen::MatrixXd::Zero(num_rows, n_loc);
  int row = 0;
  Eigen::MatrixXd R(3, n_loc);
  for (std::size_t l = 0; l < T.faces.size(); ++l) {
    const CellFace& cf = T.faces[l];
    const Face& F = mesh.face(cf.face);
    const FaceBasis& fb = face_bases[cf.face];
    const QuadRule& rule = face_rules[cf.face];
    const double sigma = cf.sign;
    const Vec3 nT = sigma * F.frame.n;
    const Vec3& t1 = F.frame.t1;
    const Vec3& t2 = F.frame.t2;
    const Vec3 mu_n = mu * nT;
    const int off = n_int + static_cast<int>(l) * 3 * nf;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q];
      const Eigen::VectorXd chi = fb.eval(rule.points[q]);
      const Eigen::VectorXd psi = cell_basis.eval(rule.points[q]);
      for (int j = 0; j < nk1; ++j) {
        // <v_b . n_T, phi_j>
        Dm.row(j).segment(off, nf) += (sigma * w * psi[j]) * chi.transpose();
        // -<v_b x n_T, phi_j e_d>; t1 x n = -t2 and t2 x n = t1
        for (int d = 0; d < 3; ++d) {
          Cm.row(d * nk1 + j).segment(off + nf, nf) += (sigma * w * psi[j] * t2[d]) * chi.transpose();
          Cm.row(d * nk1 + j).segment(off + 2 * nf, nf) -= (sigma * w * psi[j] * t1[d]) * chi.transpose();
        }
      }
      // Residual rows: (mu v_0 - v_b).n_T, (v_0 - v_b).t1, (v_0 - v_b).t2
      R.setZero();
      for (int c = 0; c < 3; ++c) {
        R.row(0).segment(c * nk, nk) = mu_n[c] * psi.transpose();
        R.row(1).segment(c * nk, nk) = t1[c] * psi.transpose();
        R.row(2).segment(c * nk, nk) = t2[c] * psi.transpose();
      }
      R.row(0).segment(off, nf) = -sigma * chi.transpose();
      R.row(1).segment(off + nf, nf) = -chi.transpose();
      R.row(2).segment(off + 2 * nf, nf) = -chi.transpose();
      ops.stab_rows.middleRows(row, 3) = std::sqrt(w / T.diameter) * R;
      row += 3;
    }
  }
  ops.stab = symmetrized(ops.stab_rows.transpose() * ops.stab_rows);

  Eigen::LLT<Eigen::MatrixXd> llt(ops.mass_low);
  if (nk1 > 0 && llt.info() != Eigen::Success)
    throw NumericError("singular P_{k-1} mass matrix on cell " + std::to_string(cell));
  ops.div_moments = Dm;
  ops.div = llt.solve(Dm);
  ops.curl.resize(3 * nk1, n_loc);
  for (int d = 0; d < 3; ++d) ops.curl.middleRows(d * nk1, nk1) = llt.solve(Cm.middleRows(d * nk1, nk1));

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * nk1, 3 * nk1);
  Eigen::MatrixXd M3 = Eigen::MatrixXd::Zero(3 * nk1, 3 * nk1);
  for (int c = 0; c < 3; ++c) {
    M3.block(c * nk1, c * nk1, nk1, nk1) = ops.mass_low;
    for (int d = 0; d < 3; ++d) K.block(c * nk1, d * nk1, nk1, nk1) = kappa(c, d) * ops.mass_low;
  }
  ops.curl_energy = symmetrized(ops.curl.transpose() * K * ops.curl);
  ops.curl_l2 = symmetrized(ops.curl.transpose() * M3 * ops.curl);
  ops.div_l2 = symmetrized(ops.div.transpose() * ops.mass_low * ops.div);
  ops.a_form = symmetrized(ops.curl_energy + ops.stab);
  return ops;
}

Eigen::VectorXd weak_divergence(const LocalOperators& ops, const Eigen::VectorXd& v_local) {
  return ops.div * v_local;
}

Eigen::VectorXd weak_curl(const LocalOperators& ops, const Eigen::VectorXd& v_local) {
  return ops.curl * v_local;
}

}  // namespace wgdc
