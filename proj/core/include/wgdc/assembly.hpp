#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wgdc/discretization.hpp"
#include "wgdc/space.hpp"

namespace wgdc {

/// Data of one model-problem instance. Empty callables mean zero data.
struct ProblemData {
  VectorField g;               // velocity right-hand side
  ScalarField f;               // right-hand side of the divergence equation
  VectorField boundary_trace;  // xi; only its tangential part on the boundary is used
  std::vector<double> beta;    // flux through each cavity boundary, size m
};

/// Numbering of the saddle-system unknowns: free velocity DoFs in V_h order,
/// then pressures, then one multiplier per cavity boundary. Tangential blocks
/// of boundary faces are fixed.
class DofMap {
 public:
  DofMap() = default;
  explicit DofMap(const Discretization& disc);

  /// Saddle index of a V_h DoF, or -1 if it is fixed.
  int free_index(int global) const { return free_[global]; }
  bool is_fixed(int global) const { return free_[global] < 0; }
  /// V_h DoF of a free velocity unknown.
  int global_index(int free) const { return global_[free]; }

  int num_free_u() const { return static_cast<int>(global_.size()); }
  int num_p() const { return num_p_; }
  int num_lambda() const { return num_lambda_; }
  int pressure_offset() const { return num_free_u(); }
  int lambda_offset() const { return num_free_u() + num_p_; }
  int size() const { return lambda_offset() + num_lambda_; }

 private:
  std::vector<int> free_;
  std::vector<int> global_;
  int num_p_ = 0;
  int num_lambda_ = 0;
};

struct SaddleSystem {
  SpaceLayout layout;
  DofMap dofs;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  /// Full V_h vector holding the prescribed values of the fixed DoFs (zero elsewhere).
  Eigen::VectorXd fixed_values;

  /// Nonzeros as "i j value" lines, column-major.
  void write_coordinates(std::ostream& out) const;
  /// Block ranges of the unknown vector, one "name begin end" line per block.
  std::string block_layout() const;
};

/// Builds the saddle system of the model problem. Throws InputError if beta
/// does not match the number of cavity boundaries or a boundary component has
/// zero area.
SaddleSystem assemble(const Discretization& disc, const ProblemData& data);

/// Recovers u_h in V_h from the free part of a saddle solution vector.
WeakFunction expand_velocity(const SaddleSystem& system, const Eigen::VectorXd& x);

double stabilizer(const Discretization& disc, const WeakFunction& v, const WeakFunction& w);
double apply_a(const Discretization& disc, const WeakFunction& v, const WeakFunction& w);
double apply_b(const Discretization& disc, const WeakFunction& v, const PressureFunction& q);

/// <v_b . n_i, 1> over boundary component `tag`, with n_i pointing out of the domain.
double boundary_flux(const Discretization& disc, const WeakFunction& v, int tag);

/// Q_b of the tangential frame components of xi on a boundary face: [t1 | t2].
Eigen::VectorXd boundary_tangential_values(const Discretization& disc, int face,
                                           const VectorField& xi);

}  // namespace wgdc
