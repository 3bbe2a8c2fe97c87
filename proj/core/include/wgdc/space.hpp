#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "wgdc/mesh.hpp"
#include "wgdc/polybasis.hpp"

namespace wgdc {

/// Fields are evaluated with the material region of the cell they are sampled
/// from, so piecewise-defined data is unambiguous on interfaces.
using ScalarField = std::function<double(const Vec3&, int region)>;
using VectorField = std::function<Vec3(const Vec3&, int region)>;

/// Per-cell constant coefficients.
struct Materials {
  std::vector<int> region;
  std::vector<Mat3> mu;
  std::vector<Mat3> kappa;

  static Materials uniform(int num_cells, const Mat3& mu, const Mat3& kappa);
};

/// Sizes and offsets of the weak vector space V_h and the pressure space W_h.
struct SpaceLayout {
  int num_cells = 0;
  int num_faces = 0;
  int degree = 1;

  int cell_dim() const { return dim_cell(degree); }
  int face_dim() const { return dim_face(degree); }
  int pressure_dim() const { return dim_cell(degree - 1); }
  int cell_block() const { return 3 * cell_dim(); }
  int face_block() const { return 3 * face_dim(); }
  int cell_offset(int cell) const { return cell * cell_block(); }
  int face_offset(int face) const { return num_cells * cell_block() + face * face_block(); }
  int size() const { return num_cells * cell_block() + num_faces * face_block(); }
  int pressure_size() const { return num_cells * pressure_dim(); }

  bool operator==(const SpaceLayout&) const = default;
};

/// v = {v_0, v_b}. Interior blocks hold 3 scalar components (x, y, z), each in
/// the cell basis; face blocks hold the (n, t1, t2) components in the face
/// frame, each in the face basis. One block per face, shared by both cells.
class WeakFunction {
 public:
  WeakFunction() = default;
  explicit WeakFunction(const SpaceLayout& layout)
      : layout_(layout), coeffs_(Eigen::VectorXd::Zero(layout.size())) {}
  WeakFunction(const SpaceLayout& layout, Eigen::VectorXd coeffs);

  const SpaceLayout& layout() const { return layout_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  auto interior(int cell) { return coeffs_.segment(layout_.cell_offset(cell), layout_.cell_block()); }
  auto interior(int cell) const {
    return coeffs_.segment(layout_.cell_offset(cell), layout_.cell_block());
  }
  /// Component c (0..2) of v_0 on a cell.
  auto interior(int cell, int c) {
    return coeffs_.segment(layout_.cell_offset(cell) + c * layout_.cell_dim(), layout_.cell_dim());
  }
  auto interior(int cell, int c) const {
    return coeffs_.segment(layout_.cell_offset(cell) + c * layout_.cell_dim(), layout_.cell_dim());
  }
  auto face(int f) { return coeffs_.segment(layout_.face_offset(f), layout_.face_block()); }
  auto face(int f) const { return coeffs_.segment(layout_.face_offset(f), layout_.face_block()); }
  /// Frame component b (0 = n, 1 = t1, 2 = t2) of v_b on a face.
  auto face(int f, int b) {
    return coeffs_.segment(layout_.face_offset(f) + b * layout_.face_dim(), layout_.face_dim());
  }
  auto face(int f, int b) const {
    return coeffs_.segment(layout_.face_offset(f) + b * layout_.face_dim(), layout_.face_dim());
  }

  WeakFunction operator-(const WeakFunction& o) const;
  WeakFunction operator+(const WeakFunction& o) const;
  WeakFunction operator*(double s) const;

 private:
  SpaceLayout layout_;
  Eigen::VectorXd coeffs_;
};

/// q in W_h: per-cell coefficients over P_{k-1}(T) in the cell basis.
class PressureFunction {
 public:
  PressureFunction() = default;
  explicit PressureFunction(const SpaceLayout& layout)
      : layout_(layout), coeffs_(Eigen::VectorXd::Zero(layout.pressure_size())) {}
  PressureFunction(const SpaceLayout& layout, Eigen::VectorXd coeffs);

  const SpaceLayout& layout() const { return layout_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  auto cell(int c) { return coeffs_.segment(c * layout_.pressure_dim(), layout_.pressure_dim()); }
  auto cell(int c) const {
    return coeffs_.segment(c * layout_.pressure_dim(), layout_.pressure_dim());
  }

  PressureFunction operator-(const PressureFunction& o) const;

 private:
  SpaceLayout layout_;
  Eigen::VectorXd coeffs_;
};

/// Throws InputError unless both layouts describe the same mesh and degree.
void require_same_layout(const SpaceLayout& a, const SpaceLayout& b);

}  // namespace wgdc
