#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wgdc/analysis.hpp"
#include "wgdc/assembly.hpp"
#include "wgdc/discretization.hpp"
#include "wgdc/mesh.hpp"
#include "wgdc/solver.hpp"
#include "wgdc/space.hpp"

namespace wgdc {

/// Manufactured solution with analytic derivatives. Coefficients are constant
/// per material region; fields take the region of the evaluating cell.
struct ExactCase {
  std::string name;
  std::string parameters;  // human-readable description echoed into reports
  std::function<int(const Vec3&)> region_of = [](const Vec3&) { return 0; };
  std::vector<Mat3> mu{Mat3::Identity()};     // per region
  std::vector<Mat3> kappa{Mat3::Identity()};  // per region

  VectorField u;
  VectorField curl_u;
  VectorField curl_curl_u;        // curl curl u; optional
  VectorField curl_kappa_curl_u;  // curl(kappa curl u)
  ScalarField div_mu_u;
  ScalarField p;
  VectorField grad_p;

  int num_regions() const { return static_cast<int>(mu.size()); }
  /// g = curl(kappa curl u) - mu grad p.
  VectorField g() const;
  ScalarField f() const { return div_mu_u; }
  VectorField xi() const { return u; }
  VectorField kappa_curl_u() const;
  /// Per-cell materials, regions taken at cell centroids.
  Materials materials(const PolyMesh& mesh) const;
  /// <mu u . n_i, 1> over each cavity boundary, n_i pointing out of the domain.
  std::vector<double> beta(const PolyMesh& mesh, int quad_degree) const;
};

/// Names accepted by catalog().
const std::vector<std::string>& catalog_names();

/// Builds a catalog case; `degree` sizes the random polynomial of poly-exact.
/// Throws InputError on an unknown name.
ExactCase catalog(const std::string& name, int degree, std::uint64_t seed = 20141120);

struct OracleReport {
  std::vector<std::string> violations;
  double max_rel_error = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Compares each analytic derivative of the case with central differences at
/// random points of the unit cube (step 1e-5, tolerance 1e-6 relative).
OracleReport check_derivatives(const ExactCase& c, int num_points = 100, std::uint64_t seed = 1);

enum class ProblemKind { Model, DivCurlNormal, DivCurlTangential };

struct CompatibilityReport {
  std::vector<std::string> violations;
  double flux_mismatch = 0.0;   // |(f,1) - <mu u.n,1>_Gamma|
  double max_div_curl = 0.0;    // max |div(curl u)| at sample points
  bool ok() const { return violations.empty(); }
};

CompatibilityReport check_compatibility(const ExactCase& c, const PolyMesh& mesh, ProblemKind kind,
                                        int quad_degree = 9);

/// A discrete problem with optional known exact solution.
struct ProblemInstance {
  std::string kind;
  Materials materials;
  ProblemData data;
  bool has_exact = false;
  VectorField u_exact;
  ScalarField p_exact;
  VectorField kappa_curl_u;
};

/// The model problem with data derived from the case.
ProblemInstance instance_model(const ExactCase& c, const PolyMesh& mesh, int quad_degree);
/// Tangential-data div-curl problem: kappa = I, right-hand side curl(curl u),
/// f = div(mu u), xi = u, exact solution (u, 0). Requires curl_curl_u.
ProblemInstance instance_tangential(const ExactCase& c, const PolyMesh& mesh, int quad_degree);
/// Normal-data saddle problem for the potential: kappa = mu^{-1}, f = 0, xi = 0,
/// beta = 0, right-hand side `g` (curl u of the case when empty).
ProblemInstance instance_normal_saddle(const ExactCase& c, const PolyMesh& mesh,
                                       VectorField g = {});
ProblemInstance make_instance(const std::string& kind, const ExactCase& c, const PolyMesh& mesh,
                              int quad_degree);

struct RunOptions {
  std::string instance = "model";
  DiscretizationOptions discretization;
  SolverOptions solver;
};

struct RunResult {
  ErrorReport report;
  Solution solution;
  long ndof = 0;
};

/// Assembles, solves and measures errors on one mesh. Errors are zero-filled
/// when the instance has no exact solution.
RunResult solve_and_measure(const ExactCase& c, const PolyMesh& mesh, int degree,
                            const RunOptions& options = {});

}  // namespace wgdc
