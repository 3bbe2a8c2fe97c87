#include "wgdc/polybasis.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Cholesky>

#include "wgdc/errors.hpp"

namespace wgdc {

namespace {

constexpr int kMaxTableDegree = 12;

std::vector<std::array<int, 3>> build_exponents3(int k) {
  std::vector<std::array<int, 3>> e;
  for (int d = 0; d <= k; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) e.push_back({a, b, d - a - b});
  return e;
}

std::vector<std::array<int, 2>> build_exponents2(int k) {
  std::vector<std::array<int, 2>> e;
  for (int d = 0; d <= k; ++d)
    for (int a = d; a >= 0; --a) e.push_back({a, d - a});
  return e;
}

void powers(double t, int k, double* out) {
  out[0] = 1.0;
  for (int i = 1; i <= k; ++i) out[i] = out[i - 1] * t;
}

}  // namespace

const std::vector<std::array<int, 3>>& monomial_exponents3(int k) {
  static const auto tables = [] {
    std::vector<std::vector<std::array<int, 3>>> t;
    for (int d = 0; d <= kMaxTableDegree; ++d) t.push_back(build_exponents3(d));
    return t;
  }();
  if (k < 0 || k > kMaxTableDegree) throw InputError("polynomial degree out of supported range");
  return tables[k];
}

const std::vector<std::array<int, 2>>& monomial_exponents2(int k) {
  static const auto tables = [] {
    std::vector<std::vector<std::array<int, 2>>> t;
    for (int d = 0; d <= kMaxTableDegree; ++d) t.push_back(build_exponents2(d));
    return t;
  }();
  if (k < 0 || k > kMaxTableDegree) throw InputError("polynomial degree out of supported range");
  return tables[k];
}

CellBasis::CellBasis(const Vec3& center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree) {
  monomial_exponents3(degree);  // range check
}

Eigen::VectorXd CellBasis::eval(const Vec3& x) const {
  const Vec3 y = (x - center_) / scale_;
  double px[kMaxTableDegree + 1], py[kMaxTableDegree + 1], pz[kMaxTableDegree + 1];
  powers(y.x(), degree_, px);
  powers(y.y(), degree_, py);
  powers(y.z(), degree_, pz);
  const auto& ex = monomial_exponents3(degree_);
  Eigen::VectorXd v(ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) v[i] = px[ex[i][0]] * py[ex[i][1]] * pz[ex[i][2]];
  return v;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> CellBasis::grad(const Vec3& x) const {
  const Vec3 y = (x - center_) / scale_;
  double p[3][kMaxTableDegree + 1];
  for (int d = 0; d < 3; ++d) powers(y[d], degree_, p[d]);
  const auto& ex = monomial_exponents3(degree_);
  Eigen::Matrix<double, Eigen::Dynamic, 3> g(ex.size(), 3);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const auto& a = ex[i];
    for (int d = 0; d < 3; ++d) {
      if (a[d] == 0) {
        g(i, d) = 0.0;
        continue;
      }
      double v = a[d] / scale_;
      for (int e = 0; e < 3; ++e) v *= (e == d) ? p[e][a[e] - 1] : p[e][a[e]];
      g(i, d) = v;
    }
  }
  return g;
}

Eigen::MatrixXd CellBasis::derivative_matrix(int axis, int from, int to) const {
  const auto& src = monomial_exponents3(from);
  const auto& dst = monomial_exponents3(to);
  std::map<std::array<int, 3>, int> index;
  for (std::size_t i = 0; i < dst.size(); ++i) index[dst[i]] = static_cast<int>(i);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    auto a = src[j];
    if (a[axis] == 0) continue;
    const double c = a[axis] / scale_;
    --a[axis];
    auto it = index.find(a);
    if (it == index.end()) throw InputError("derivative target degree too small");
    D(it->second, j) = c;
  }
  return D;
}

FaceBasis::FaceBasis(const Vec3& center, const Vec3& t1, const Vec3& t2, double scale, int degree)
    : center_(center), t1_(t1), t2_(t2), scale_(scale), degree_(degree) {
  monomial_exponents2(degree);
}

Eigen::VectorXd FaceBasis::eval(const Vec3& x) const {
  const Vec3 d = x - center_;
  double ps[kMaxTableDegree + 1], pt[kMaxTableDegree + 1];
  powers(d.dot(t1_) / scale_, degree_, ps);
  powers(d.dot(t2_) / scale_, degree_, pt);
  const auto& ex = monomial_exponents2(degree_);
  Eigen::VectorXd v(ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) v[i] = ps[ex[i][0]] * pt[ex[i][1]];
  return v;
}

CellBasis make_cell_basis(const PolyMesh& mesh, int cell, int degree) {
  const Cell& c = mesh.cell(cell);
  return CellBasis(c.centroid, c.diameter, degree);
}

FaceBasis make_face_basis(const PolyMesh& mesh, int face, int degree) {
  const Face& f = mesh.face(face);
  return FaceBasis(f.centroid, f.frame.t1, f.frame.t2, f.diameter, degree);
}

template <class Basis>
Eigen::VectorXd l2_project(const PointFunction& field, const Basis& basis, const QuadRule& rule,
                           int dim) {
  const int n = dim < 0 ? basis.size() : dim;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd v = basis.eval(rule.points[q]).head(n);
    M.noalias() += rule.weights[q] * v * v.transpose();
    b += rule.weights[q] * field(rule.points[q]) * v;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw NumericError("singular mass matrix (degenerate element)");
  return llt.solve(b);
}

template Eigen::VectorXd l2_project<CellBasis>(const PointFunction&, const CellBasis&,
                                               const QuadRule&, int);
template Eigen::VectorXd l2_project<FaceBasis>(const PointFunction&, const FaceBasis&,
                                               const QuadRule&, int);

Eigen::VectorXd l2_project_cell(const PointFunction& field, const PolyMesh& mesh, int cell,
                                int degree, int quad_degree) {
  const QuadRule rule = cell_quadrature(mesh, cell, quad_degree < 0 ? 2 * degree + 3 : quad_degree);
  return l2_project(field, make_cell_basis(mesh, cell, degree), rule);
}

Eigen::VectorXd l2_project_face(const PointFunction& field, const PolyMesh& mesh, int face,
                                int degree, int quad_degree) {
  const QuadRule rule = face_quadrature(mesh, face, quad_degree < 0 ? 2 * degree + 3 : quad_degree);
  return l2_project(field, make_face_basis(mesh, face, degree), rule);
}

}  // namespace wgdc
