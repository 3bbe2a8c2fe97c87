#pragma once

#include <Eigen/Core>

#include "wgdc/discretization.hpp"
#include "wgdc/space.hpp"

namespace wgdc {

/// Q_h u = {Q_0 u, Q_b(mu u.n) n + Q_b(tangential part of u)}; face data use
/// the owner cell's mu and region.
WeakFunction project_Qh(const Discretization& disc, const VectorField& u);

/// Cellwise L2 projection of p onto P_{k-1}.
PressureFunction project_pressure(const Discretization& disc, const ScalarField& p);

/// Cellwise L2 projection of a vector field onto [P_{k-1}(T)]^3, component-major.
Eigen::VectorXd project_vector_low(const Discretization& disc, int cell, const VectorField& v);

/// Cellwise L2 projection of a scalar field onto P_{k-1}(T).
Eigen::VectorXd project_scalar_low(const Discretization& disc, int cell, const ScalarField& s);

/// Q_b of the frame components of w on a face: [w.n | w.t1 | w.t2].
Eigen::VectorXd project_face_frame(const Discretization& disc, int face, const VectorField& w,
                                   int region);

}  // namespace wgdc
