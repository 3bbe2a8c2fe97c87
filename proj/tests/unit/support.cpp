#include "support.hpp"

#include <cmath>

#include "wgdc/polybasis.hpp"

namespace wgdc::test {

RandomPolyField::RandomPolyField(int deg, std::mt19937_64& rng)
    : degree(deg), exps(monomial_exponents3(deg)) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  coeffs.resize(3, static_cast<Eigen::Index>(exps.size()));
  for (int i = 0; i < coeffs.size(); ++i) coeffs.data()[i] = d(rng);
}

Vec3 RandomPolyField::operator()(const Vec3& x) const {
  Vec3 v = Vec3::Zero();
  for (std::size_t t = 0; t < exps.size(); ++t) {
    const auto& e = exps[t];
    v += coeffs.col(t) * std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]);
  }
  return v;
}

Mat3 RandomPolyField::jacobian(const Vec3& x) const {
  Mat3 J = Mat3::Zero();
  for (std::size_t t = 0; t < exps.size(); ++t) {
    const auto& e = exps[t];
    for (int j = 0; j < 3; ++j) {
      if (e[j] == 0) continue;
      double m = e[j];
      for (int a = 0; a < 3; ++a) m *= std::pow(x[a], a == j ? e[a] - 1 : e[a]);
      J.col(j) += coeffs.col(t) * m;
    }
  }
  return J;
}

}  // namespace wgdc::test
