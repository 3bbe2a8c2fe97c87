#include "wgdc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include <Eigen/Eigenvalues>

#include "wgdc/errors.hpp"

namespace wgdc {

GaussRule1D gauss_jacobi_01(int n, int alpha) {
  // Golub-Welsch on [-1,1] with weight (1-t)^alpha, then mapped to [0,1].
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double s = 2.0 * j + a + b;
    J(j, j) = (j == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (j > 0) {
      const double num = 4.0 * j * (j + a) * (j + b) * (j + a + b);
      const double den = s * s * (s + 1.0) * (s - 1.0);
      J(j, j - 1) = J(j - 1, j) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  GaussRule1D r;
  const double scale = std::pow(0.5, a + 1.0);
  for (int j = 0; j < n; ++j) {
    const double v0 = eig.eigenvectors()(0, j);
    r.points.push_back(0.5 * (1.0 + eig.eigenvalues()(j)));
    r.weights.push_back(scale * mu0 * v0 * v0);
  }
  return r;
}

namespace {

int points_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

QuadRule make_reference_tet(int degree) {
  const int n = points_for_degree(degree);
  const GaussRule1D gu = gauss_jacobi_01(n, 2), gv = gauss_jacobi_01(n, 1),
                    gw = gauss_jacobi_01(n, 0);
  QuadRule r;
  r.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double u = gu.points[i], v = gv.points[j], w = gw.points[k];
        r.points.emplace_back(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v));
        r.weights.push_back(gu.weights[i] * gv.weights[j] * gw.weights[k]);
      }
  return r;
}

QuadRule make_reference_triangle(int degree) {
  const int n = points_for_degree(degree);
  const GaussRule1D gu = gauss_jacobi_01(n, 1), gv = gauss_jacobi_01(n, 0);
  QuadRule r;
  r.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = gu.points[i], v = gv.points[j];
      r.points.emplace_back(u, v * (1.0 - u), 0.0);
      r.weights.push_back(gu.weights[i] * gv.weights[j]);
    }
  return r;
}

template <class Make>
const QuadRule& cached(std::map<int, QuadRule>& cache, std::mutex& m, int degree, Make make) {
  std::lock_guard lock(m);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make(degree)).first;
  return it->second;
}

void append_tet(QuadRule& out, const QuadRule& ref, const Vec3& p0, const Vec3& p1,
                const Vec3& p2, const Vec3& p3) {
  Mat3 J;
  J.col(0) = p1 - p0;
  J.col(1) = p2 - p0;
  J.col(2) = p3 - p0;
  const double det = std::abs(J.determinant());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    out.points.push_back(p0 + J * ref.points[q]);
    out.weights.push_back(det * ref.weights[q]);
  }
}

void append_triangle(QuadRule& out, const QuadRule& ref, const Vec3& p0, const Vec3& p1,
                     const Vec3& p2) {
  const Vec3 e1 = p1 - p0, e2 = p2 - p0;
  const double jac = e1.cross(e2).norm();
  for (std::size_t q = 0; q < ref.size(); ++q) {
    out.points.push_back(p0 + ref.points[q].x() * e1 + ref.points[q].y() * e2);
    out.weights.push_back(jac * ref.weights[q]);
  }
}

}  // namespace

const QuadRule& reference_tet_rule(int degree) {
  static std::map<int, QuadRule> cache;
  static std::mutex m;
  return cached(cache, m, degree, make_reference_tet);
}

const QuadRule& reference_triangle_rule(int degree) {
  static std::map<int, QuadRule> cache;
  static std::mutex m;
  return cached(cache, m, degree, make_reference_triangle);
}

QuadRule cell_quadrature(const PolyMesh& mesh, int cell, int degree) {
  if (degree < 0) throw InputError("quadrature degree must be non-negative");
  const QuadRule& ref = reference_tet_rule(degree);
  const Cell& c = mesh.cell(cell);
  const auto& V = mesh.vertices();
  QuadRule r;
  r.degree = degree;
  const Vec3& apex = c.centroid;
  auto add = [&](const Vec3& a, const Vec3& b, const Vec3& d, int sign) {
    const double vol = sign * (a - apex).dot((b - apex).cross(d - apex)) / 6.0;
    if (!(vol > 0.0))
      throw InputError("cell " + std::to_string(cell) +
                       " is not star-shaped with respect to its centroid");
    append_tet(r, ref, apex, a, b, d);
  };
  for (const auto& cf : c.faces) {
    const Face& f = mesh.face(cf.face);
    const std::size_t nv = f.vertices.size();
    if (nv == 3) {
      add(V[f.vertices[0]], V[f.vertices[1]], V[f.vertices[2]], cf.sign);
      continue;
    }
    for (std::size_t i = 0; i < nv; ++i)
      add(f.centroid, V[f.vertices[i]], V[f.vertices[(i + 1) % nv]], cf.sign);
  }
  return r;
}

QuadRule face_quadrature(const PolyMesh& mesh, int face, int degree) {
  if (degree < 0) throw InputError("quadrature degree must be non-negative");
  const QuadRule& ref = reference_triangle_rule(degree);
  const Face& f = mesh.face(face);
  const auto& V = mesh.vertices();
  QuadRule r;
  r.degree = degree;
  const std::size_t nv = f.vertices.size();
  if (nv == 3) {
    append_triangle(r, ref, V[f.vertices[0]], V[f.vertices[1]], V[f.vertices[2]]);
    return r;
  }
  for (std::size_t i = 0; i < nv; ++i)
    append_triangle(r, ref, f.centroid, V[f.vertices[i]], V[f.vertices[(i + 1) % nv]]);
  return r;
}

}  // namespace wgdc
