#include "wgdc/verification.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "wgdc/errors.hpp"
#include "wgdc/polybasis.hpp"
#include "wgdc/quadrature.hpp"

namespace wgdc {

namespace {

constexpr double kPi = std::numbers::pi;

// Polynomial in global coordinates as a list of monomial terms.
struct Poly {
  std::vector<std::pair<std::array<int, 3>, double>> terms;

  double operator()(const Vec3& x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms)
      s += c * std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]);
    return s;
  }
  Poly d(int axis) const {
    Poly r;
    for (auto [e, c] : terms) {
      if (e[axis] == 0) continue;
      c *= e[axis];
      --e[axis];
      r.terms.emplace_back(e, c);
    }
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r = *this;
    for (auto [e, c] : o.terms) r.terms.emplace_back(e, -c);
    return r;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r;
  }
};

using PolyVec = std::array<Poly, 3>;

PolyVec curl(const PolyVec& u) {
  return {u[2].d(1) - u[1].d(2), u[0].d(2) - u[2].d(0), u[1].d(0) - u[0].d(1)};
}

VectorField to_field(const PolyVec& v) {
  return [v](const Vec3& x, int) { return Vec3(v[0](x), v[1](x), v[2](x)); };
}

ExactCase poly_exact(int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PolyVec u;
  for (auto& comp : u)
    for (const auto& e : monomial_exponents3(degree)) comp.terms.emplace_back(e, dist(rng));
  const PolyVec cu = curl(u);
  const PolyVec ccu = curl(cu);
  const Poly div = u[0].d(0) + u[1].d(1) + u[2].d(2);

  ExactCase c;
  c.name = "poly-exact";
  c.parameters = fmt::format("u random in [P_{}]^3 (seed {}), p = 0, mu = kappa = I", degree, seed);
  c.u = to_field(u);
  c.curl_u = to_field(cu);
  c.curl_curl_u = to_field(ccu);
  c.curl_kappa_curl_u = c.curl_curl_u;
  c.div_mu_u = [div](const Vec3& x, int) { return div(x); };
  c.p = [](const Vec3&, int) { return 0.0; };
  c.grad_p = [](const Vec3&, int) { return Vec3::Zero().eval(); };
  return c;
}

// u = (sin(pi y) sin(pi z), sin(pi z) sin(pi x), sin(pi x) sin(pi y)): divergence free,
// curl curl u = 2 pi^2 u.
void set_trig_velocity(ExactCase& c) {
  c.u = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]), sy = std::sin(kPi * x[1]), sz = std::sin(kPi * x[2]);
    return Vec3(sy * sz, sz * sx, sx * sy);
  };
  c.curl_u = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]), sy = std::sin(kPi * x[1]), sz = std::sin(kPi * x[2]);
    const double cx = std::cos(kPi * x[0]), cy = std::cos(kPi * x[1]), cz = std::cos(kPi * x[2]);
    return Vec3(kPi * sx * (cy - cz), kPi * sy * (cz - cx), kPi * sz * (cx - cy));
  };
  const VectorField u = c.u;
  c.curl_curl_u = [u](const Vec3& x, int r) { return (2 * kPi * kPi * u(x, r)).eval(); };
  c.curl_kappa_curl_u = c.curl_curl_u;
  c.div_mu_u = [](const Vec3&, int) { return 0.0; };
}

// p = sin(a x) sin(a y) sin(a z).
void set_sine_pressure(ExactCase& c, double a) {
  c.p = [a](const Vec3& x, int) {
    return std::sin(a * x[0]) * std::sin(a * x[1]) * std::sin(a * x[2]);
  };
  c.grad_p = [a](const Vec3& x, int) {
    const double sx = std::sin(a * x[0]), sy = std::sin(a * x[1]), sz = std::sin(a * x[2]);
    const double cx = std::cos(a * x[0]), cy = std::cos(a * x[1]), cz = std::cos(a * x[2]);
    return Vec3(a * cx * sy * sz, a * sx * cy * sz, a * sx * sy * cz);
  };
}

ExactCase trig_cube() {
  ExactCase c;
  c.name = "trig-cube";
  c.parameters =
      "u = (sin(pi y) sin(pi z), sin(pi z) sin(pi x), sin(pi x) sin(pi y)), "
      "p = sin(pi x) sin(pi y) sin(pi z), mu = kappa = I";
  set_trig_velocity(c);
  set_sine_pressure(c, kPi);
  return c;
}

ExactCase trig_hollow() {
  ExactCase c;
  c.name = "trig-hollow";
  c.parameters =
      "u = (sin(pi y) sin(pi z), sin(pi z) sin(pi x), sin(pi x) sin(pi y)), "
      "p = sin(3 pi x) sin(3 pi y) sin(3 pi z), mu = kappa = I, cavity [1/3, 2/3]^3";
  set_trig_velocity(c);
  set_sine_pressure(c, 3 * kPi);
  return c;
}

// mu = I for x < 1/2 and 2I otherwise; u_x = 1 resp. 1/2 keeps mu u . e_x continuous.
ExactCase two_material() {
  ExactCase c;
  c.name = "two-material";
  c.parameters =
      "mu = I (x < 1/2), 2I (x >= 1/2), kappa = I, "
      "u = (c, sin(pi z) sin(pi x), sin(pi x) sin(pi y)) with c = 1 resp. 1/2, p = 0";
  c.region_of = [](const Vec3& x) { return x[0] < 0.5 ? 0 : 1; };
  c.mu = {Mat3::Identity(), 2.0 * Mat3::Identity()};
  c.kappa = {Mat3::Identity(), Mat3::Identity()};
  c.u = [](const Vec3& x, int r) {
    const double sx = std::sin(kPi * x[0]);
    return Vec3(r == 0 ? 1.0 : 0.5, std::sin(kPi * x[2]) * sx, sx * std::sin(kPi * x[1]));
  };
  c.curl_u = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]), sy = std::sin(kPi * x[1]), sz = std::sin(kPi * x[2]);
    const double cx = std::cos(kPi * x[0]), cy = std::cos(kPi * x[1]), cz = std::cos(kPi * x[2]);
    return Vec3(kPi * sx * (cy - cz), -kPi * cx * sy, kPi * cx * sz);
  };
  c.curl_curl_u = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]);
    return Vec3(0.0, 2 * kPi * kPi * sx * std::sin(kPi * x[2]),
                2 * kPi * kPi * sx * std::sin(kPi * x[1]));
  };
  c.curl_kappa_curl_u = c.curl_curl_u;
  c.div_mu_u = [](const Vec3&, int) { return 0.0; };
  c.p = [](const Vec3&, int) { return 0.0; };
  c.grad_p = [](const Vec3&, int) { return Vec3::Zero().eval(); };
  return c;
}

using Jacobian = Eigen::Matrix3d;  // J(i, j) = d v_i / d x_j

Jacobian fd_jacobian(const VectorField& v, const Vec3& x, int r, double step) {
  Jacobian J;
  for (int j = 0; j < 3; ++j) {
    const Vec3 e = step * Vec3::Unit(j);
    J.col(j) = (v(x + e, r) - v(x - e, r)) / (2 * step);
  }
  return J;
}

Vec3 curl_of(const Jacobian& J) { return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)}; }

double rel_error(const Vec3& analytic, const Vec3& fd, double scale) {
  return (analytic - fd).norm() / (1.0 + std::max(analytic.norm(), scale));
}

}  // namespace

VectorField ExactCase::g() const {
  return [ck = curl_kappa_curl_u, gp = grad_p, mu = mu](const Vec3& x, int r) {
    return (ck(x, r) - mu[r] * gp(x, r)).eval();
  };
}

VectorField ExactCase::kappa_curl_u() const {
  return [cu = curl_u, kappa = kappa](const Vec3& x, int r) { return (kappa[r] * cu(x, r)).eval(); };
}

Materials ExactCase::materials(const PolyMesh& mesh) const {
  Materials m;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int r = region_of(mesh.cell(c).centroid);
    if (r < 0 || r >= num_regions())
      throw InputError(fmt::format("case {} has no material for region {}", name, r));
    m.region.push_back(r);
    m.mu.push_back(mu[r]);
    m.kappa.push_back(kappa[r]);
  }
  return m;
}

std::vector<double> ExactCase::beta(const PolyMesh& mesh, int quad_degree) const {
  std::vector<double> b(mesh.m(), 0.0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& F = mesh.face(f);
    if (!F.is_boundary() || F.tag < 1) continue;
    const int r = region_of(mesh.cell(F.owner).centroid);
    const Vec3 n = mesh.outward_normal(f);
    const QuadRule rule = face_quadrature(mesh, f, quad_degree);
    for (std::size_t q = 0; q < rule.size(); ++q)
      b[F.tag - 1] += rule.weights[q] * (mu[r] * u(rule.points[q], r)).dot(n);
  }
  return b;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"poly-exact", "trig-cube", "trig-hollow",
                                              "two-material"};
  return names;
}

ExactCase catalog(const std::string& name, int degree, std::uint64_t seed) {
  if (name == "poly-exact") return poly_exact(degree, seed);
  if (name == "trig-cube") return trig_cube();
  if (name == "trig-hollow") return trig_hollow();
  if (name == "two-material") return two_material();
  throw InputError(fmt::format("unknown case '{}' (expected one of: {})", name,
                               fmt::join(catalog_names(), ", ")));
}

OracleReport check_derivatives(const ExactCase& c, int num_points, std::uint64_t seed) {
  constexpr double step = 1e-5, tol = 1e-6;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  OracleReport rep;
  auto record = [&](const char* what, double err, const Vec3& x) {
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    if (err > tol && rep.violations.size() < 10)
      rep.violations.push_back(fmt::format("{}: relative error {:.2e} at ({:.4f}, {:.4f}, {:.4f})",
                                           what, err, x[0], x[1], x[2]));
  };
  for (int i = 0; i < num_points; ++i) {
    Vec3 x(dist(rng), dist(rng), dist(rng));
    const int r = c.region_of(x);
    // Stay away from material interfaces, where fields are only piecewise smooth.
    bool near_interface = false;
    for (int j = 0; j < 3 && !near_interface; ++j)
      for (double s : {-10 * step, 10 * step})
        if (c.region_of(x + s * Vec3::Unit(j)) != r) near_interface = true;
    if (near_interface) {
      --i;
      continue;
    }
    const Jacobian Ju = fd_jacobian(c.u, x, r, step);
    const double scale_u = c.u(x, r).norm();
    record("curl u", rel_error(c.curl_u(x, r), curl_of(Ju), scale_u), x);
    const double div_fd = (c.mu[r] * Ju).trace();
    const double div_an = c.div_mu_u(x, r);
    record("div(mu u)", std::abs(div_an - div_fd) / (1.0 + std::max(std::abs(div_an), scale_u)), x);
    const Jacobian Jk = fd_jacobian(c.kappa_curl_u(), x, r, step);
    record("curl(kappa curl u)",
           rel_error(c.curl_kappa_curl_u(x, r), curl_of(Jk), c.curl_u(x, r).norm()), x);
    if (c.curl_curl_u) {
      const Jacobian Jc = fd_jacobian(c.curl_u, x, r, step);
      record("curl curl u", rel_error(c.curl_curl_u(x, r), curl_of(Jc), c.curl_u(x, r).norm()), x);
    }
    Vec3 gp_fd;
    for (int j = 0; j < 3; ++j) {
      const Vec3 e = step * Vec3::Unit(j);
      gp_fd[j] = (c.p(x + e, r) - c.p(x - e, r)) / (2 * step);
    }
    record("grad p", rel_error(c.grad_p(x, r), gp_fd, std::abs(c.p(x, r))), x);
  }
  return rep;
}

CompatibilityReport check_compatibility(const ExactCase& c, const PolyMesh& mesh, ProblemKind kind,
                                        int quad_degree) {
  CompatibilityReport rep;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const VectorField g = c.g();
  for (int i = 0; i < 100; ++i) {
    const Vec3 x(dist(rng), dist(rng), dist(rng));
    const int r = c.region_of(x);
    if (!g(x, r).allFinite() || !std::isfinite(c.div_mu_u(x, r)) || !c.u(x, r).allFinite()) {
      rep.violations.push_back(
          fmt::format("non-finite data at ({:.4f}, {:.4f}, {:.4f})", x[0], x[1], x[2]));
      break;
    }
  }
  if (kind == ProblemKind::Model) return rep;

  // (f, 1) against the boundary flux <mu u . n, 1>
  double volume_term = 0.0, boundary_term = 0.0, scale = 0.0;
  for (int t = 0; t < mesh.num_cells(); ++t) {
    const int r = c.region_of(mesh.cell(t).centroid);
    const QuadRule rule = cell_quadrature(mesh, t, quad_degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double fv = c.div_mu_u(rule.points[q], r);
      volume_term += rule.weights[q] * fv;
      scale += rule.weights[q] * std::abs(fv);
    }
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.face(f).is_boundary()) continue;
    const int r = c.region_of(mesh.cell(mesh.face(f).owner).centroid);
    const Vec3 n = mesh.outward_normal(f);
    const QuadRule rule = face_quadrature(mesh, f, quad_degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double flux = (c.mu[r] * c.u(rule.points[q], r)).dot(n);
      boundary_term += rule.weights[q] * flux;
      scale += rule.weights[q] * std::abs(flux);
    }
  }
  rep.flux_mismatch = std::abs(volume_term - boundary_term);
  if (rep.flux_mismatch > 1e-8 * (1.0 + scale))
    rep.violations.push_back(fmt::format("flux compatibility: (f,1) = {:.10g} but boundary flux = {:.10g} (mismatch {:.3e})",
                                         volume_term, boundary_term, rep.flux_mismatch));

  // div g = 0 for the curl data g = curl u
  constexpr double step = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const Vec3 x(dist(rng), dist(rng), dist(rng));
    const int r = c.region_of(x);
    const double div = fd_jacobian(c.curl_u, x, r, step).trace();
    rep.max_div_curl = std::max(rep.max_div_curl, std::abs(div) / (1.0 + c.curl_u(x, r).norm()));
  }
  if (rep.max_div_curl > 1e-8)
    rep.violations.push_back(fmt::format("curl data not divergence free: {:.3e}", rep.max_div_curl));
  return rep;
}

ProblemInstance instance_model(const ExactCase& c, const PolyMesh& mesh, int quad_degree) {
  ProblemInstance inst;
  inst.kind = "model";
  inst.materials = c.materials(mesh);
  inst.data.g = c.g();
  inst.data.f = c.f();
  inst.data.boundary_trace = c.xi();
  inst.data.beta = c.beta(mesh, quad_degree);
  inst.has_exact = true;
  inst.u_exact = c.u;
  inst.p_exact = c.p;
  inst.kappa_curl_u = c.kappa_curl_u();
  return inst;
}

ProblemInstance instance_tangential(const ExactCase& c, const PolyMesh& mesh, int quad_degree) {
  if (!c.curl_curl_u)
    throw InputError(fmt::format("case {} provides no analytic curl of its curl data", c.name));
  ProblemInstance inst;
  inst.kind = "tangential";
  Materials m = c.materials(mesh);
  for (auto& k : m.kappa) k = Mat3::Identity();
  inst.materials = std::move(m);
  inst.data.g = c.curl_curl_u;
  inst.data.f = c.f();
  inst.data.boundary_trace = c.xi();
  inst.data.beta = c.beta(mesh, quad_degree);
  inst.has_exact = true;
  inst.u_exact = c.u;
  inst.p_exact = [](const Vec3&, int) { return 0.0; };
  inst.kappa_curl_u = c.curl_u;
  return inst;
}

ProblemInstance instance_normal_saddle(const ExactCase& c, const PolyMesh& mesh, VectorField g) {
  ProblemInstance inst;
  inst.kind = "normal-saddle";
  Materials m = c.materials(mesh);
  for (std::size_t i = 0; i < m.mu.size(); ++i) m.kappa[i] = m.mu[i].inverse();
  inst.materials = std::move(m);
  inst.data.g = g ? std::move(g) : c.curl_u;
  inst.data.beta.assign(mesh.m(), 0.0);
  inst.has_exact = false;
  return inst;
}

ProblemInstance make_instance(const std::string& kind, const ExactCase& c, const PolyMesh& mesh,
                              int quad_degree) {
  if (kind == "model") return instance_model(c, mesh, quad_degree);
  if (kind == "tangential") return instance_tangential(c, mesh, quad_degree);
  if (kind == "normal-saddle") return instance_normal_saddle(c, mesh);
  throw InputError("unknown instance '" + kind + "' (expected model, tangential or normal-saddle)");
}

RunResult solve_and_measure(const ExactCase& c, const PolyMesh& mesh, int degree,
                            const RunOptions& options) {
  const int data_degree = options.discretization.data_degree < 0 ? 2 * degree + 3
                                                                 : options.discretization.data_degree;
  ProblemInstance inst = make_instance(options.instance, c, mesh, data_degree);
  const Discretization disc(mesh, degree, inst.materials, options.discretization);
  const SaddleSystem sys = assemble(disc, inst.data);
  RunResult r;
  r.solution = solve(sys, options.solver);
  r.ndof = sys.dofs.size();
  if (inst.has_exact) r.report = compute_errors(disc, r.solution.u, r.solution.p, inst.u_exact, inst.p_exact);
  r.report.h = mesh.h();
  r.report.ndof = r.ndof;
  r.report.residual = r.solution.residual;
  return r;
}

}  // namespace wgdc
