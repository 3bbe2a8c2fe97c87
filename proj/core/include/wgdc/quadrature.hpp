#pragma once

#include <vector>

#include "wgdc/mesh.hpp"

namespace wgdc {

/// Points and positive weights on a cell, a face, or a reference shape.
struct QuadRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int degree = 0;  // exact for polynomials of total degree <= degree

  std::size_t size() const { return weights.size(); }
};

struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule on [0,1] for the weight (1-x)^alpha.
GaussRule1D gauss_jacobi_01(int n, int alpha);

/// Collapsed-coordinate rule on the unit tetrahedron {x,y,z >= 0, x+y+z <= 1}.
const QuadRule& reference_tet_rule(int degree);
/// Collapsed-coordinate rule on the unit triangle (z = 0).
const QuadRule& reference_triangle_rule(int degree);

/// Rule on a polyhedral cell, built from the fan of tetrahedra about the cell
/// centroid. Throws InputError if the cell is not star-shaped w.r.t. its centroid.
QuadRule cell_quadrature(const PolyMesh& mesh, int cell, int degree);

/// Rule on a planar face, built from the fan of triangles about its centroid.
QuadRule face_quadrature(const PolyMesh& mesh, int face, int degree);

}  // namespace wgdc
