#include "wgdc/space.hpp"

#include "wgdc/errors.hpp"

namespace wgdc {

Materials Materials::uniform(int num_cells, const Mat3& mu, const Mat3& kappa) {
  Materials m;
  m.region.assign(num_cells, 0);
  m.mu.assign(num_cells, mu);
  m.kappa.assign(num_cells, kappa);
  return m;
}

void require_same_layout(const SpaceLayout& a, const SpaceLayout& b) {
  if (!(a == b)) throw InputError("weak functions live on different meshes or degrees");
}

WeakFunction::WeakFunction(const SpaceLayout& layout, Eigen::VectorXd coeffs)
    : layout_(layout), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != layout_.size()) throw InputError("coefficient vector has wrong size");
}

WeakFunction WeakFunction::operator-(const WeakFunction& o) const {
  require_same_layout(layout_, o.layout_);
  return WeakFunction(layout_, coeffs_ - o.coeffs_);
}

WeakFunction WeakFunction::operator+(const WeakFunction& o) const {
  require_same_layout(layout_, o.layout_);
  return WeakFunction(layout_, coeffs_ + o.coeffs_);
}

WeakFunction WeakFunction::operator*(double s) const { return WeakFunction(layout_, coeffs_ * s); }

PressureFunction::PressureFunction(const SpaceLayout& layout, Eigen::VectorXd coeffs)
    : layout_(layout), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != layout_.pressure_size())
    throw InputError("pressure coefficient vector has wrong size");
}

PressureFunction PressureFunction::operator-(const PressureFunction& o) const {
  require_same_layout(layout_, o.layout_);
  return PressureFunction(layout_, coeffs_ - o.coeffs_);
}

}  // namespace wgdc
