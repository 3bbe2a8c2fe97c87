#pragma once

#include <vector>

#include <Eigen/Core>

#include "wgdc/mesh.hpp"
#include "wgdc/polybasis.hpp"
#include "wgdc/quadrature.hpp"
#include "wgdc/space.hpp"
#include "wgdc/weakops.hpp"

namespace wgdc {

struct DiscretizationOptions {
  int data_degree = -1;  // exactness for data integrals; -1 selects 2k + 3
  int threads = 1;       // workers for local operator construction
};

/// Degree-k weak Galerkin space on a mesh with per-cell coefficients: bases,
/// quadrature rules and cached element operators. Keeps a reference to the
/// mesh, which must outlive it. Immutable after construction.
class Discretization {
 public:
  Discretization(const PolyMesh& mesh, int degree, Materials materials,
                 DiscretizationOptions options = {});

  const PolyMesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int data_degree() const { return data_degree_; }
  const Materials& materials() const { return materials_; }
  const SpaceLayout& layout() const { return layout_; }

  const CellBasis& cell_basis(int cell) const { return cell_bases_[cell]; }
  const FaceBasis& face_basis(int face) const { return face_bases_[face]; }
  /// Rules exact to degree 2k, for products of discrete functions.
  const QuadRule& cell_rule(int cell) const { return cell_rules_[cell]; }
  const QuadRule& face_rule(int face) const { return face_rules_[face]; }
  /// Rules exact to data_degree(), for integrals involving given fields.
  const QuadRule& cell_data_rule(int cell) const { return cell_data_rules_[cell]; }
  const QuadRule& face_data_rule(int face) const { return face_data_rules_[face]; }

  const LocalOperators& local(int cell) const { return local_[cell]; }

  /// Global (full V_h) indices of the local DoF vector of a cell.
  std::vector<int> local_dofs(int cell) const;
  Eigen::VectorXd gather(const WeakFunction& v, int cell) const;

  WeakFunction zero_function() const { return WeakFunction(layout_); }
  PressureFunction zero_pressure() const { return PressureFunction(layout_); }

  /// Value of v_0 on a cell at x.
  Vec3 eval_interior(const WeakFunction& v, int cell, const Vec3& x) const;
  /// Value of v_b (as a 3-vector) on a face at x.
  Vec3 eval_face(const WeakFunction& v, int face, const Vec3& x) const;
  double eval_pressure(const PressureFunction& q, int cell, const Vec3& x) const;

 private:
  const PolyMesh* mesh_;
  int degree_;
  int data_degree_;
  Materials materials_;
  SpaceLayout layout_;
  std::vector<CellBasis> cell_bases_;
  std::vector<FaceBasis> face_bases_;
  std::vector<QuadRule> cell_rules_, face_rules_, cell_data_rules_, face_data_rules_;
  std::vector<LocalOperators> local_;
};

}  // namespace wgdc
