#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wgdc/discretization.hpp"
#include "wgdc/space.hpp"

namespace wgdc {

/// |||v|||_1: weak curl, weak divergence and stabilizer contributions.
double norm_bar1(const Discretization& disc, const WeakFunction& v);
/// |||v||| = a(v, v)^{1/2}.
double norm_a(const Discretization& disc, const WeakFunction& v);
/// Mesh-dependent pressure norm: gradients, interior jumps and boundary deviations.
double norm_Wh(const Discretization& disc, const PressureFunction& q);
/// (sum_T h_T ||v_b||^2_{dT})^{1/2}; each face counts once per adjacent cell.
double norm_Eh(const Discretization& disc, const WeakFunction& v);
/// |v|_{1,h} = s(v, v)^{1/2}.
double seminorm_1h(const Discretization& disc, const WeakFunction& v);
/// L2 norm of the interior part v_0.
double norm_l2_interior(const Discretization& disc, const WeakFunction& v);
/// L2 norm of a pressure function.
double norm_l2(const Discretization& disc, const PressureFunction& q);

/// Mean of q over boundary component `tag` (zero for tag 0).
double boundary_mean(const Discretization& disc, const PressureFunction& q, int tag);

/// Inf-sup test function v_q = {-h^2 grad q, h v_{q,b}}.
WeakFunction infsup_function(const Discretization& disc, const PressureFunction& q);
/// h^2 sum (mu grad q, grad q) + h sum ||[q]||^2 + h sum ||q - qbar_i||^2, which b(v_q, q) equals.
double infsup_identity_value(const Discretization& disc, const PressureFunction& q);

struct ResidualFunctionals {
  double ell = 0.0;    // consistency error of the curl term
  double theta = 0.0;  // consistency error of the pressure term
  double phi = 0.0;    // ell + theta + s(Q_h u, v)
};

/// Evaluates the consistency functionals at v. `kappa_curl_u` is kappa curl u,
/// `Qh_u` the projection of the exact solution. Integrals use the data rules.
ResidualFunctionals residual_functionals(const Discretization& disc,
                                         const VectorField& kappa_curl_u, const ScalarField& p,
                                         const WeakFunction& Qh_u, const WeakFunction& v);

/// Least-squares slope of log(error) against log(h). Throws InputError on
/// fewer than two pairs or a non-positive value.
double convergence_rate(const std::vector<std::pair<double, double>>& pairs);

struct ErrorReport {
  double h = 0.0;
  long ndof = 0;
  double err_bar1 = 0.0;  // |||Q_h u - u_h|||_1
  double err_bar = 0.0;   // |||Q_h u - u_h|||
  double err_wh = 0.0;    // ||Q_h p - p_h||_{W_h}
  double err_l2 = 0.0;    // ||Q_0 u - u_0||
  double err_eh = 0.0;    // ||Q_b u - u_b||_{E_h}
  double err_1h = 0.0;    // |Q_h u - u_h|_{1,h}
  double residual = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

ErrorReport compute_errors(const Discretization& disc, const WeakFunction& u_h,
                           const PressureFunction& p_h, const VectorField& u,
                           const ScalarField& p);

}  // namespace wgdc
