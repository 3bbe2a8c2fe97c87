#pragma once

#include <random>
#include <string>

#include "wgdc/discretization.hpp"
#include "wgdc/mesh.hpp"
#include "wgdc/space.hpp"

namespace wgdc::test {

inline Materials uniform_materials(const PolyMesh& mesh, const Mat3& mu = Mat3::Identity(),
                                   const Mat3& kappa = Mat3::Identity()) {
  return Materials::uniform(mesh.num_cells(), mu, kappa);
}

inline Mat3 random_spd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = d(rng);
  return a * a.transpose() + Mat3::Identity();
}

inline WeakFunction random_weak(const Discretization& disc, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  WeakFunction v = disc.zero_function();
  for (int i = 0; i < v.coeffs().size(); ++i) v.coeffs()[i] = d(rng);
  return v;
}

inline PressureFunction random_pressure(const Discretization& disc, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  PressureFunction q = disc.zero_pressure();
  for (int i = 0; i < q.coeffs().size(); ++i) q.coeffs()[i] = d(rng);
  return q;
}

/// Zeroes the tangential blocks of boundary faces.
inline void clear_boundary_tangential(const Discretization& disc, WeakFunction& v) {
  for (int f = 0; f < disc.mesh().num_faces(); ++f)
    if (disc.mesh().face(f).is_boundary()) {
      v.face(f, 1).setZero();
      v.face(f, 2).setZero();
    }
}

/// Unit tetrahedron with outward face loops.
inline std::string unit_tet_text() {
  return "wgmesh 1\n"
         "vertices 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
         "faces 4\n3 0 2 1 0\n3 0 1 3 0\n3 0 3 2 0\n3 1 2 3 0\n"
         "cells 1\n4 0 1 2 3\n";
}

/// Polynomial vector field with random coefficients in global monomials.
struct RandomPolyField {
  int degree;
  std::vector<std::array<int, 3>> exps;
  Eigen::MatrixXd coeffs;  // 3 x terms

  RandomPolyField(int deg, std::mt19937_64& rng);
  Vec3 operator()(const Vec3& x) const;
  Mat3 jacobian(const Vec3& x) const;  // J(i, j) = d u_i / d x_j
  Vec3 curl(const Vec3& x) const {
    const Mat3 J = jacobian(x);
    return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)};
  }
};

}  // namespace wgdc::test
