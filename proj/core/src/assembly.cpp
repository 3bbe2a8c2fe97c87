#include "wgdc/assembly.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "wgdc/errors.hpp"
#include "wgdc/projection.hpp"

namespace wgdc {

DofMap::DofMap(const Discretization& disc) {
  const SpaceLayout& L = disc.layout();
  const PolyMesh& mesh = disc.mesh();
  free_.assign(L.size(), 0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.face(f).is_boundary()) continue;
    for (int i = L.face_dim(); i < L.face_block(); ++i) free_[L.face_offset(f) + i] = -1;
  }
  for (int i = 0; i < L.size(); ++i) {
    if (free_[i] < 0) continue;
    free_[i] = static_cast<int>(global_.size());
    global_.push_back(i);
  }
  num_p_ = L.pressure_size();
  num_lambda_ = mesh.m();
}

void SaddleSystem::write_coordinates(std::ostream& out) const {
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it)
      out << fmt::format("{} {} {:.17g}\n", it.row(), it.col(), it.value());
}

std::string SaddleSystem::block_layout() const {
  std::ostringstream s;
  s << fmt::format("velocity {} {}\n", 0, dofs.num_free_u());
  s << fmt::format("pressure {} {}\n", dofs.pressure_offset(), dofs.lambda_offset());
  s << fmt::format("multiplier {} {}\n", dofs.lambda_offset(), dofs.size());
  s << fmt::format("degree {}\ncells {}\nfaces {}\n", layout.degree, layout.num_cells,
                   layout.num_faces);
  return s.str();
}

Eigen::VectorXd boundary_tangential_values(const Discretization& disc, int face,
                                           const VectorField& xi) {
  const int owner = disc.mesh().face(face).owner;
  const Eigen::VectorXd all =
      project_face_frame(disc, face, xi, disc.materials().region[owner]);
  const int nf = disc.layout().face_dim();
  return all.tail(2 * nf);
}

SaddleSystem assemble(const Discretization& disc, const ProblemData& data) {
  const PolyMesh& mesh = disc.mesh();
  const SpaceLayout& L = disc.layout();
  const int m = mesh.m();
  if (static_cast<int>(data.beta.size()) != m)
    throw InputError(fmt::format("expected {} boundary flux values, got {}", m, data.beta.size()));
  for (int i = 1; i <= m; ++i)
    if (!(mesh.boundary_area(i) > 0.0))
      throw InputError(fmt::format("boundary component {} has zero area", i));

  SaddleSystem sys;
  sys.layout = L;
  sys.dofs = DofMap(disc);
  const DofMap& dm = sys.dofs;
  const int nk = L.cell_dim(), np = L.pressure_dim(), nf = L.face_dim();

  sys.fixed_values = Eigen::VectorXd::Zero(L.size());
  if (data.boundary_trace) {
    for (int f = 0; f < mesh.num_faces(); ++f) {
      if (!mesh.face(f).is_boundary()) continue;
      sys.fixed_values.segment(L.face_offset(f) + nf, 2 * nf) =
          boundary_tangential_values(disc, f, data.boundary_trace);
    }
  }

  sys.rhs = Eigen::VectorXd::Zero(dm.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalOperators& ops = disc.local(c);
    const std::vector<int> gl = disc.local_dofs(c);
    const int n = static_cast<int>(gl.size());
    const int p0 = dm.pressure_offset() + c * np;
    for (int a = 0; a < n; ++a) {
      const int ia = dm.free_index(gl[a]);
      if (ia < 0) continue;
      for (int b = 0; b < n; ++b) {
        const double val = ops.a_form(a, b);
        if (val == 0.0) continue;
        const int ib = dm.free_index(gl[b]);
        if (ib >= 0)
          trip.emplace_back(ia, ib, val);
        else
          sys.rhs[ia] -= val * sys.fixed_values[gl[b]];
      }
      for (int j = 0; j < np; ++j) {
        const double val = ops.div_moments(j, a);
        if (val == 0.0) continue;
        trip.emplace_back(p0 + j, ia, val);
        trip.emplace_back(ia, p0 + j, val);
      }
    }
    for (int j = 0; j < np; ++j)
      for (int b = 0; b < n; ++b)
        if (dm.is_fixed(gl[b])) sys.rhs[p0 + j] -= ops.div_moments(j, b) * sys.fixed_values[gl[b]];

    const CellBasis& cb = disc.cell_basis(c);
    const QuadRule& rule = disc.cell_data_rule(c);
    const int region = disc.materials().region[c];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3& x = rule.points[q];
      const Eigen::VectorXd psi = cb.eval(x);
      if (data.g) {
        const Vec3 g = data.g(x, region);
        for (int d = 0; d < 3; ++d)
          for (int i = 0; i < nk; ++i)
            sys.rhs[dm.free_index(L.cell_offset(c) + d * nk + i)] += rule.weights[q] * g[d] * psi[i];
      }
      if (data.f) {
        const double fv = data.f(x, region);
        for (int j = 0; j < np; ++j) sys.rhs[p0 + j] += rule.weights[q] * fv * psi[j];
      }
    }
  }

  // <v_b . n_i, 1> on each cavity boundary
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    if (!F.is_boundary() || F.tag < 1) continue;
    const double sigma = mesh.outward_normal(f).dot(F.frame.n) > 0.0 ? 1.0 : -1.0;
    const FaceBasis& fb = disc.face_basis(f);
    const QuadRule& rule = disc.face_rule(f);
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(nf);
    for (std::size_t q = 0; q < rule.size(); ++q) moments += rule.weights[q] * fb.eval(rule.points[q]);
    const int row = dm.lambda_offset() + F.tag - 1;
    for (int j = 0; j < nf; ++j) {
      const int col = dm.free_index(L.face_offset(f) + j);
      trip.emplace_back(row, col, sigma * moments[j]);
      trip.emplace_back(col, row, sigma * moments[j]);
    }
  }
  for (int i = 0; i < m; ++i) sys.rhs[dm.lambda_offset() + i] = data.beta[i];

  sys.matrix.resize(dm.size(), dm.size());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

WeakFunction expand_velocity(const SaddleSystem& system, const Eigen::VectorXd& x) {
  WeakFunction u(system.layout, system.fixed_values);
  for (int i = 0; i < system.dofs.num_free_u(); ++i)
    u.coeffs()[system.dofs.global_index(i)] = x[i];
  return u;
}

namespace {

template <class Pick>
double local_form(const Discretization& disc, const WeakFunction& v, const WeakFunction& w,
                  Pick pick) {
  require_same_layout(disc.layout(), v.layout());
  require_same_layout(disc.layout(), w.layout());
  double sum = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    sum += disc.gather(v, c).dot(pick(disc.local(c)) * disc.gather(w, c));
  return sum;
}

}  // namespace

double stabilizer(const Discretization& disc, const WeakFunction& v, const WeakFunction& w) {
  require_same_layout(disc.layout(), v.layout());
  require_same_layout(disc.layout(), w.layout());
  double sum = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    const Eigen::MatrixXd& R = disc.local(c).stab_rows;
    sum += (R * disc.gather(v, c)).dot(R * disc.gather(w, c));
  }
  return sum;
}

double apply_a(const Discretization& disc, const WeakFunction& v, const WeakFunction& w) {
  return local_form(disc, v, w,
                    [](const LocalOperators& o) -> const Eigen::MatrixXd& { return o.a_form; });
}

double apply_b(const Discretization& disc, const WeakFunction& v, const PressureFunction& q) {
  require_same_layout(disc.layout(), v.layout());
  require_same_layout(disc.layout(), q.layout());
  double sum = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    sum += q.cell(c).dot(disc.local(c).div_moments * disc.gather(v, c));
  return sum;
}

double boundary_flux(const Discretization& disc, const WeakFunction& v, int tag) {
  const PolyMesh& mesh = disc.mesh();
  double sum = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    if (!F.is_boundary() || F.tag != tag) continue;
    const double sigma = mesh.outward_normal(f).dot(F.frame.n) > 0.0 ? 1.0 : -1.0;
    const FaceBasis& fb = disc.face_basis(f);
    const QuadRule& rule = disc.face_rule(f);
    for (std::size_t q = 0; q < rule.size(); ++q)
      sum += sigma * rule.weights[q] * fb.eval(rule.points[q]).dot(v.face(f, 0));
  }
  return sum;
}

}  // namespace wgdc
