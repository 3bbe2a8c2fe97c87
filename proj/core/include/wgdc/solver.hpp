#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wgdc/assembly.hpp"
#include "wgdc/space.hpp"

namespace wgdc {

enum class SolverMethod { Auto, Direct, Krylov };

struct SolverOptions {
  double rel_tol = 1e-10;
  SolverMethod method = SolverMethod::Auto;
  /// Auto switches to the Krylov solver above this many unknowns.
  int direct_max_unknowns = 200000;
  int max_iterations = 20000;
};

SolverMethod parse_solver_method(const std::string& name);

struct LinearSolveResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||Mx - b|| / ||b||, or ||x|| when b = 0
  std::string method;
  int iterations = 0;     // refinement steps or Krylov iterations
};

/// Solves M x = b for a square nonsingular (possibly indefinite) M. Throws
/// NumericError carrying the residual if the tolerance is not met.
LinearSolveResult solve_linear(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& b,
                               const SolverOptions& options = {});

struct Solution {
  WeakFunction u;
  PressureFunction p;
  std::vector<double> lambda;
  double residual = 0.0;
  std::string method;
  int iterations = 0;
};

Solution solve(const SaddleSystem& system, const SolverOptions& options = {});

}  // namespace wgdc
