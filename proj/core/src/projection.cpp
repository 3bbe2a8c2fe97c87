#include "wgdc/projection.hpp"

namespace wgdc {

namespace {

Eigen::VectorXd project_cell_component(const Discretization& disc, int cell, int dim,
                                       const PointFunction& fn) {
  return l2_project(fn, disc.cell_basis(cell), disc.cell_data_rule(cell), dim);
}

}  // namespace

WeakFunction project_Qh(const Discretization& disc, const VectorField& u) {
  const PolyMesh& mesh = disc.mesh();
  const Materials& mat = disc.materials();
  const int nk = disc.layout().cell_dim();
  WeakFunction v = disc.zero_function();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int r = mat.region[c];
    for (int d = 0; d < 3; ++d)
      v.interior(c, d) =
          project_cell_component(disc, c, nk, [&](const Vec3& x) { return u(x, r)[d]; });
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const int owner = mesh.face(f).owner;
    const Mat3& mu = mat.mu[owner];
    const int r = mat.region[owner];
    const FaceFrame& fr = mesh.face(f).frame;
    const FaceBasis& fb = disc.face_basis(f);
    const QuadRule& rule = disc.face_data_rule(f);
    v.face(f, 0) = l2_project([&](const Vec3& x) { return (mu * u(x, r)).dot(fr.n); }, fb, rule);
    v.face(f, 1) = l2_project([&](const Vec3& x) { return u(x, r).dot(fr.t1); }, fb, rule);
    v.face(f, 2) = l2_project([&](const Vec3& x) { return u(x, r).dot(fr.t2); }, fb, rule);
  }
  return v;
}

PressureFunction project_pressure(const Discretization& disc, const ScalarField& p) {
  PressureFunction q = disc.zero_pressure();
  for (int c = 0; c < disc.mesh().num_cells(); ++c) q.cell(c) = project_scalar_low(disc, c, p);
  return q;
}

Eigen::VectorXd project_vector_low(const Discretization& disc, int cell, const VectorField& v) {
  const int n = disc.layout().pressure_dim();
  const int r = disc.materials().region[cell];
  Eigen::VectorXd out(3 * n);
  for (int d = 0; d < 3; ++d)
    out.segment(d * n, n) =
        project_cell_component(disc, cell, n, [&](const Vec3& x) { return v(x, r)[d]; });
  return out;
}

Eigen::VectorXd project_scalar_low(const Discretization& disc, int cell, const ScalarField& s) {
  const int r = disc.materials().region[cell];
  return project_cell_component(disc, cell, disc.layout().pressure_dim(),
                                [&](const Vec3& x) { return s(x, r); });
}

Eigen::VectorXd project_face_frame(const Discretization& disc, int face, const VectorField& w,
                                   int region) {
  const FaceFrame& fr = disc.mesh().face(face).frame;
  const FaceBasis& fb = disc.face_basis(face);
  const QuadRule& rule = disc.face_data_rule(face);
  const int nf = fb.size();
  Eigen::VectorXd out(3 * nf);
  const Vec3* axes[3] = {&fr.n, &fr.t1, &fr.t2};
  for (int b = 0; b < 3; ++b)
    out.segment(b * nf, nf) =
        l2_project([&](const Vec3& x) { return w(x, region).dot(*axes[b]); }, fb, rule);
  return out;
}

}  // namespace wgdc
