#include "wgdc/analysis.hpp"

#include <cmath>

#include <fmt/format.h>

#include "wgdc/assembly.hpp"
#include "wgdc/errors.hpp"
#include "wgdc/projection.hpp"

namespace wgdc {

namespace {

template <class... Member>
double quadratic(const Discretization& disc, const WeakFunction& v, Member... members) {
  require_same_layout(disc.layout(), v.layout());
  double sum = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    const Eigen::VectorXd x = disc.gather(v, c);
    const LocalOperators& ops = disc.local(c);
    ((sum += x.dot(ops.*members * x)), ...);
  }
  return sum;
}

double safe_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

// Value of q on cell c at x (P_{k-1} part of the cell basis).
double pressure_at(const Discretization& disc, const PressureFunction& q, int c, const Vec3& x) {
  return disc.eval_pressure(q, c, x);
}

Vec3 pressure_grad(const Discretization& disc, const PressureFunction& q, int c, const Vec3& x) {
  const int n = disc.layout().pressure_dim();
  return disc.cell_basis(c).grad(x).topRows(n).transpose() * q.cell(c);
}

double sigma_out(const PolyMesh& mesh, int f) {
  return mesh.outward_normal(f).dot(mesh.face(f).frame.n) > 0.0 ? 1.0 : -1.0;
}

// The three sums of the W_h norm; mu weights the gradient term.
double wh_square(const Discretization& disc, const PressureFunction& q, bool with_mu) {
  const PolyMesh& mesh = disc.mesh();
  const double h = mesh.h();
  double grad_term = 0.0, jump_term = 0.0, bnd_term = 0.0;
  if (disc.degree() > 1) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const QuadRule& rule = disc.cell_rule(c);
      const Mat3& mu = disc.materials().mu[c];
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const Vec3 g = pressure_grad(disc, q, c, rule.points[i]);
        grad_term += rule.weights[i] * (with_mu ? g.dot(mu * g) : g.squaredNorm());
      }
    }
  }
  std::vector<double> means(mesh.m() + 1, 0.0);
  for (int t = 1; t <= mesh.m(); ++t) means[t] = boundary_mean(disc, q, t);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    const QuadRule& rule = disc.face_rule(f);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Vec3& x = rule.points[i];
      if (F.is_boundary()) {
        const double d = pressure_at(disc, q, F.owner, x) - means[F.tag];
        bnd_term += rule.weights[i] * d * d;
      } else {
        const double d = pressure_at(disc, q, F.owner, x) - pressure_at(disc, q, F.neighbor, x);
        jump_term += rule.weights[i] * d * d;
      }
    }
  }
  return h * h * grad_term + h * (jump_term + bnd_term);
}

}  // namespace

double norm_bar1(const Discretization& disc, const WeakFunction& v) {
  return safe_sqrt(
      quadratic(disc, v, &LocalOperators::curl_l2, &LocalOperators::div_l2, &LocalOperators::stab));
}

double norm_a(const Discretization& disc, const WeakFunction& v) {
  return safe_sqrt(quadratic(disc, v, &LocalOperators::a_form));
}

double seminorm_1h(const Discretization& disc, const WeakFunction& v) {
  return safe_sqrt(stabilizer(disc, v, v));
}

double norm_Wh(const Discretization& disc, const PressureFunction& q) {
  require_same_layout(disc.layout(), q.layout());
  return safe_sqrt(wh_square(disc, q, false));
}

double infsup_identity_value(const Discretization& disc, const PressureFunction& q) {
  require_same_layout(disc.layout(), q.layout());
  return wh_square(disc, q, true);
}

double norm_Eh(const Discretization& disc, const WeakFunction& v) {
  require_same_layout(disc.layout(), v.layout());
  const PolyMesh& mesh = disc.mesh();
  double sum = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    const Eigen::MatrixXd M = mass_matrix(disc.face_basis(f), disc.face_rule(f));
    double face_sq = 0.0;
    for (int b = 0; b < 3; ++b) face_sq += v.face(f, b).dot(M * v.face(f, b));
    double weight = mesh.cell(F.owner).diameter;
    if (!F.is_boundary()) weight += mesh.cell(F.neighbor).diameter;
    sum += weight * face_sq;
  }
  return safe_sqrt(sum);
}

double norm_l2_interior(const Discretization& disc, const WeakFunction& v) {
  require_same_layout(disc.layout(), v.layout());
  double sum = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    for (int d = 0; d < 3; ++d) sum += v.interior(c, d).dot(disc.local(c).mass * v.interior(c, d));
  return safe_sqrt(sum);
}

double norm_l2(const Discretization& disc, const PressureFunction& q) {
  require_same_layout(disc.layout(), q.layout());
  double sum = 0.0;
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
    sum += q.cell(c).dot(disc.local(c).mass_low * q.cell(c));
  return safe_sqrt(sum);
}

double boundary_mean(const Discretization& disc, const PressureFunction& q, int tag) {
  if (tag == 0) return 0.0;
  const PolyMesh& mesh = disc.mesh();
  double integral = 0.0, area = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    if (!F.is_boundary() || F.tag != tag) continue;
    const QuadRule& rule = disc.face_rule(f);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      integral += rule.weights[i] * pressure_at(disc, q, F.owner, rule.points[i]);
      area += rule.weights[i];
    }
  }
  if (!(area > 0.0)) throw InputError(fmt::format("boundary component {} has zero area", tag));
  return integral / area;
}

WeakFunction infsup_function(const Discretization& disc, const PressureFunction& q) {
  require_same_layout(disc.layout(), q.layout());
  const PolyMesh& mesh = disc.mesh();
  const int k = disc.degree();
  const double h = mesh.h();
  WeakFunction v = disc.zero_function();
  if (k > 1) {
    const int nk = disc.layout().cell_dim();
    for (int c = 0; c < mesh.num_cells(); ++c)
      for (int d = 0; d < 3; ++d)
        v.interior(c, d) =
            -h * h * (disc.cell_basis(c).derivative_matrix(d, k - 1, k) * q.cell(c)).head(nk);
  }
  std::vector<double> means(mesh.m() + 1, 0.0);
  for (int t = 1; t <= mesh.m(); ++t) means[t] = boundary_mean(disc, q, t);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    PointFunction trace;
    if (F.is_boundary()) {
      const double s = sigma_out(mesh, f), mean = means[F.tag];
      trace = [&, s, mean](const Vec3& x) {
        return s * h * (pressure_at(disc, q, F.owner, x) - mean);
      };
    } else {
      trace = [&](const Vec3& x) {
        return h * (pressure_at(disc, q, F.owner, x) - pressure_at(disc, q, F.neighbor, x));
      };
    }
    v.face(f, 0) = l2_project(trace, disc.face_basis(f), disc.face_rule(f));
  }
  return v;
}

ResidualFunctionals residual_functionals(const Discretization& disc,
                                         const VectorField& kappa_curl_u, const ScalarField& p,
                                         const WeakFunction& Qh_u, const WeakFunction& v) {
  require_same_layout(disc.layout(), v.layout());
  const PolyMesh& mesh = disc.mesh();
  const int np = disc.layout().pressure_dim();
  ResidualFunctionals r;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& T = mesh.cell(c);
    const Mat3& mu = disc.materials().mu[c];
    const Eigen::VectorXd kc = project_vector_low(disc, c, kappa_curl_u);
    const Eigen::VectorXd pc = project_scalar_low(disc, c, p);
    const int region = disc.materials().region[c];
    for (const CellFace& cf : T.faces) {
      const Vec3 nT = cf.sign * mesh.face(cf.face).frame.n;
      const QuadRule& rule = disc.face_data_rule(cf.face);
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const Vec3& x = rule.points[i];
        const Eigen::VectorXd psi = disc.cell_basis(c).eval(x);
        const Vec3 v0 = disc.eval_interior(v, c, x);
        const Vec3 vb = disc.eval_face(v, cf.face, x);
        Vec3 Qk;
        for (int d = 0; d < 3; ++d) Qk[d] = psi.head(np).dot(kc.segment(d * np, np));
        const double w = rule.weights[i];
        r.ell += w * (Qk - kappa_curl_u(x, region)).dot((v0 - vb).cross(nT));
        r.theta += w * (p(x, region) - psi.head(np).dot(pc)) * (mu * v0 - vb).dot(nT);
      }
    }
  }
  r.phi = r.ell + r.theta + stabilizer(disc, Qh_u, v);
  return r;
}

double convergence_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw InputError("convergence rate needs at least two (h, error) pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, e] : pairs) {
    if (!(h > 0.0) || !(e > 0.0))
      throw InputError(fmt::format("convergence rate needs positive values, got ({}, {})", h, e));
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InputError("convergence rate needs distinct mesh sizes");
  return (n * sxy - sx * sy) / denom;
}

std::string ErrorReport::csv_header() { return "h,ndof,err_bar1,err_bar,err_wh,err_l2,err_eh,residual"; }

std::string ErrorReport::csv_row() const {
  return fmt::format("{:.10e},{},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.3e}", h, ndof,
                     err_bar1, err_bar, err_wh, err_l2, err_eh, residual);
}

ErrorReport compute_errors(const Discretization& disc, const WeakFunction& u_h,
                           const PressureFunction& p_h, const VectorField& u,
                           const ScalarField& p) {
  const WeakFunction e = project_Qh(disc, u) - u_h;
  const PressureFunction eps = project_pressure(disc, p) - p_h;
  ErrorReport r;
  r.h = disc.mesh().h();
  r.err_bar1 = norm_bar1(disc, e);
  r.err_bar = norm_a(disc, e);
  r.err_wh = norm_Wh(disc, eps);
  r.err_l2 = norm_l2_interior(disc, e);
  r.err_eh = norm_Eh(disc, e);
  r.err_1h = seminorm_1h(disc, e);
  return r;
}

}  // namespace wgdc
