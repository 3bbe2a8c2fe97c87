#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wgdc/analysis.hpp"
#include "wgdc/mesh.hpp"
#include "wgdc/solver.hpp"

namespace wgdc::cli {

/// Settings of one run or refinement study.
struct StudyConfig {
  std::string case_name = "trig-cube";
  std::string mesh = "tet";  // tet, hex, hollow, or a mesh file path
  std::vector<int> levels{2, 4, 8};
  int degree = 1;
  std::string out;  // output prefix; <out>.csv and <out>.md
  std::string instance = "model";
  SolverOptions solver;
  int threads = 1;
  int data_degree = -1;
  std::uint64_t seed = 20141120;
  bool parallel_meshes = false;

  /// Throws InputError unless levels are positive and strictly increasing and k >= 1.
  void validate() const;
  bool mesh_is_family() const { return mesh == "tet" || mesh == "hex" || mesh == "hollow"; }
};

/// Mesh of a generated family at refinement level n, or the mesh file.
PolyMesh make_mesh(const std::string& mesh, int n);

struct StudyRow {
  int level = 0;
  ErrorReport report;
  std::string solver_method;
};

std::vector<StudyRow> run_study(const StudyConfig& config);

std::string format_csv(const std::vector<StudyRow>& rows);
/// Markdown table of errors and observed rates; `floor` marks exactly resolved columns.
std::string format_markdown(const StudyConfig& config, const std::vector<StudyRow>& rows,
                            double floor = 1e-10);

/// Replaces "--config FILE" with the file's key=value entries as flags placed
/// after the subcommand; keys also given on the command line are skipped.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Entry point; returns the process exit code (0 ok, 1 numeric failure, 2 input error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wgdc::cli
