#include "wgdc/discretization.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "wgdc/errors.hpp"

namespace wgdc {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is written
// by exactly one worker, so results do not depend on scheduling.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (int i = t; i < n; i += threads) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Discretization::Discretization(const PolyMesh& mesh, int degree, Materials materials,
                               DiscretizationOptions options)
    : mesh_(&mesh),
      degree_(degree),
      data_degree_(options.data_degree < 0 ? 2 * degree + 3 : options.data_degree),
      materials_(std::move(materials)),
      layout_{mesh.num_cells(), mesh.num_faces(), degree} {
  if (degree < 1) throw InputError("polynomial degree k must be >= 1");
  const int nc = mesh.num_cells(), nf = mesh.num_faces();
  if (static_cast<int>(materials_.mu.size()) != nc ||
      static_cast<int>(materials_.kappa.size()) != nc ||
      static_cast<int>(materials_.region.size()) != nc)
    throw InputError("materials must provide one entry per cell");

  face_bases_.resize(nf);
  face_rules_.resize(nf);
  face_data_rules_.resize(nf);
  parallel_for(nf, options.threads, [&](int f) {
    face_bases_[f] = make_face_basis(mesh, f, degree);
    face_rules_[f] = face_quadrature(mesh, f, 2 * degree);
    face_data_rules_[f] = face_quadrature(mesh, f, data_degree_);
  });

  cell_bases_.resize(nc);
  cell_rules_.resize(nc);
  cell_data_rules_.resize(nc);
  local_.resize(nc);
  parallel_for(nc, options.threads, [&](int c) {
    cell_bases_[c] = make_cell_basis(mesh, c, degree);
    cell_rules_[c] = cell_quadrature(mesh, c, 2 * degree);
    cell_data_rules_[c] = cell_quadrature(mesh, c, data_degree_);
    local_[c] = build_local_operators(mesh, c, degree, materials_.mu[c], materials_.kappa[c],
                                      cell_bases_[c], cell_rules_[c], face_bases_, face_rules_);
  });
}

std::vector<int> Discretization::local_dofs(int cell) const {
  const Cell& T = mesh_->cell(cell);
  std::vector<int> dofs;
  dofs.reserve(layout_.cell_block() + T.faces.size() * layout_.face_block());
  for (int i = 0; i < layout_.cell_block(); ++i) dofs.push_back(layout_.cell_offset(cell) + i);
  for (const auto& cf : T.faces)
    for (int i = 0; i < layout_.face_block(); ++i) dofs.push_back(layout_.face_offset(cf.face) + i);
  return dofs;
}

Eigen::VectorXd Discretization::gather(const WeakFunction& v, int cell) const {
  require_same_layout(layout_, v.layout());
  const Cell& T = mesh_->cell(cell);
  Eigen::VectorXd out(layout_.cell_block() + T.faces.size() * layout_.face_block());
  out.head(layout_.cell_block()) = v.interior(cell);
  for (std::size_t l = 0; l < T.faces.size(); ++l)
    out.segment(layout_.cell_block() + l * layout_.face_block(), layout_.face_block()) =
        v.face(T.faces[l].face);
  return out;
}

Vec3 Discretization::eval_interior(const WeakFunction& v, int cell, const Vec3& x) const {
  const Eigen::VectorXd psi = cell_bases_[cell].eval(x);
  return {psi.dot(v.interior(cell, 0)), psi.dot(v.interior(cell, 1)), psi.dot(v.interior(cell, 2))};
}

Vec3 Discretization::eval_face(const WeakFunction& v, int face, const Vec3& x) const {
  const Eigen::VectorXd chi = face_bases_[face].eval(x);
  const FaceFrame& fr = mesh_->face(face).frame;
  return chi.dot(v.face(face, 0)) * fr.n + chi.dot(v.face(face, 1)) * fr.t1 +
         chi.dot(v.face(face, 2)) * fr.t2;
}

double Discretization::eval_pressure(const PressureFunction& q, int cell, const Vec3& x) const {
  const int n = layout_.pressure_dim();
  return cell_bases_[cell].eval(x).head(n).dot(q.cell(cell));
}

}  // namespace wgdc
