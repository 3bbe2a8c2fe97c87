#include "wgdc/solver.hpp"

#include <cmath>

#include <Eigen/SparseLU>
#ifdef WGDC_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <fmt/format.h>

#include "wgdc/errors.hpp"

namespace wgdc {

namespace {

double relative_residual(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double nb = b.norm();
  if (nb == 0.0) return x.norm();
  return (b - M * x).norm() / nb;
}

template <class Factor>
LinearSolveResult direct_solve(Factor& lu, const Eigen::SparseMatrix<double>& M,
                               const Eigen::VectorXd& b, const char* name, double tol) {
  lu.compute(M);
  if (lu.info() != Eigen::Success)
    throw NumericError(fmt::format("{} factorization failed (singular system)", name));
  LinearSolveResult r;
  r.method = name;
  r.x = lu.solve(b);
  r.residual = relative_residual(M, r.x, b);
  // Iterative refinement guards against pivot growth.
  for (int it = 0; it < 3 && r.residual > 0.01 * tol && b.norm() > 0.0; ++it) {
    const Eigen::VectorXd dx = lu.solve(Eigen::VectorXd(b - M * r.x));
    const Eigen::VectorXd x = r.x + dx;
    const double res = relative_residual(M, x, b);
    if (!(res < r.residual)) break;
    r.x = x;
    r.residual = res;
    ++r.iterations;
  }
  return r;
}

// MINRES (Paige-Saunders) on D M D y = D b with x = D y, D = diag(|m_ii|^{-1/2}).
LinearSolveResult minres(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& b,
                         double tol, int max_it) {
  const int n = static_cast<int>(b.size());
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(M.coeff(i, i));
    if (a > 0.0) d[i] = 1.0 / std::sqrt(a);
  }
  const Eigen::SparseMatrix<double> S = d.asDiagonal() * M * d.asDiagonal();
  const Eigen::VectorXd rhs = d.cwiseProduct(b);

  LinearSolveResult r;
  r.method = "minres";
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  if (b.norm() == 0.0) {
    r.x = y;
    return r;
  }
  Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n), v = rhs, w = Eigen::VectorXd::Zero(n),
                  w_old = Eigen::VectorXd::Zero(n);
  double beta = v.norm();
  v /= beta;
  double eta = beta, c = 1, c_old = 1, s = 0, s_old = 0, beta_prev = 0;
  // Check the true residual of the original system periodically.
  for (int it = 1; it <= max_it; ++it) {
    Eigen::VectorXd Av = S * v;
    const double alpha = v.dot(Av);
    Av -= alpha * v + beta_prev * v_old;
    const double beta_new = Av.norm();
    const double rho0 = c * alpha - c_old * s * beta_prev;
    const double rho1 = std::hypot(rho0, beta_new);
    const double rho2 = s * alpha + c_old * c * beta_prev;
    const double rho3 = s_old * beta_prev;
    c_old = c;
    s_old = s;
    c = rho0 / rho1;
    s = beta_new / rho1;
    const Eigen::VectorXd w_new = (v - rho3 * w_old - rho2 * w) / rho1;
    y += c * eta * w_new;
    eta = -s * eta;
    w_old = w;
    w = w_new;
    v_old = v;
    v = Av / (beta_new > 0 ? beta_new : 1.0);
    beta_prev = beta_new;
    r.iterations = it;
    if (std::abs(eta) / rhs.norm() < 0.1 * tol || beta_new == 0.0 || it % 50 == 0) {
      r.x = d.cwiseProduct(y);
      r.residual = relative_residual(M, r.x, b);
      if (r.residual <= tol || beta_new == 0.0) return r;
    }
  }
  r.x = d.cwiseProduct(y);
  r.residual = relative_residual(M, r.x, b);
  return r;
}

}  // namespace

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "auto") return SolverMethod::Auto;
  if (name == "direct") return SolverMethod::Direct;
  if (name == "krylov") return SolverMethod::Krylov;
  throw InputError("unknown solver '" + name + "' (expected auto, direct or krylov)");
}

LinearSolveResult solve_linear(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& b,
                               const SolverOptions& options) {
  if (M.rows() != M.cols() || M.rows() != b.size())
    throw InputError("linear system dimensions do not match");
  bool direct = options.method == SolverMethod::Direct ||
                (options.method == SolverMethod::Auto && M.rows() <= options.direct_max_unknowns);
  LinearSolveResult r;
  if (direct) {
    try {
#ifdef WGDC_HAVE_UMFPACK
      Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
      // Nested dissection on A + A^T keeps fill moderate for 3D saddle systems.
      lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
      lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
      r = direct_solve(lu, M, b, "umfpack", options.rel_tol);
#else
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      r = direct_solve(lu, M, b, "sparselu", options.rel_tol);
#endif
    } catch (const NumericError&) {
      // Factorization can fail for lack of memory; Auto retries iteratively.
      if (options.method != SolverMethod::Auto) throw;
      direct = false;
    }
  }
  if (!direct) {
    r = minres(M, b, options.rel_tol, options.max_iterations);
  }
  if (!(r.residual <= options.rel_tol))
    throw NumericError(fmt::format("{} solve did not converge: relative residual {:.3e} > {:.1e}",
                                   r.method, r.residual, options.rel_tol));
  return r;
}

Solution solve(const SaddleSystem& system, const SolverOptions& options) {
  const LinearSolveResult r = solve_linear(system.matrix, system.rhs, options);
  const DofMap& dm = system.dofs;
  Solution s;
  s.u = expand_velocity(system, r.x);
  s.p = PressureFunction(system.layout, r.x.segment(dm.pressure_offset(), dm.num_p()));
  for (int i = 0; i < dm.num_lambda(); ++i) s.lambda.push_back(r.x[dm.lambda_offset() + i]);
  s.residual = r.residual;
  s.method = r.method;
  s.iterations = r.iterations;
  return s;
}

}  // namespace wgdc
