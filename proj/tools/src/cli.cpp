#include "wgdc_tools/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wgdc/errors.hpp"
#include "wgdc/verification.hpp"

namespace wgdc::cli {

namespace {

constexpr double kExactFloor = 1e-10;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

// Five error columns of the study and their labels.
struct Column {
  const char* label;
  double ErrorReport::*member;
};
constexpr Column kColumns[] = {
    {"bar1", &ErrorReport::err_bar1}, {"bar", &ErrorReport::err_bar},
    {"W_h", &ErrorReport::err_wh},    {"L2", &ErrorReport::err_l2},
    {"E_h", &ErrorReport::err_eh},    {"1,h", &ErrorReport::err_1h},
};

std::string rate_cell(const std::vector<std::pair<double, double>>& pairs, double floor) {
  bool all_below = true;
  for (const auto& [h, e] : pairs) all_below = all_below && e < floor;
  if (all_below) return "exact";
  for (const auto& [h, e] : pairs)
    if (!(e > 0.0)) return "-";
  return fmt::format("{:.2f}", convergence_rate(pairs));
}

}  // namespace

void StudyConfig::validate() const {
  if (degree < 1) throw InputError("degree k must be >= 1");
  if (levels.empty()) throw InputError("no refinement levels given");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw InputError("refinement levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw InputError("refinement levels must be strictly increasing");
  }
  if (threads < 1) throw InputError("threads must be >= 1");
  if (!(solver.rel_tol > 0.0)) throw InputError("solver tolerance must be positive");
}

PolyMesh make_mesh(const std::string& mesh, int n) {
  if (mesh == "tet") return build_cube_tet_mesh(n);
  if (mesh == "hex") return build_cube_hex_mesh(n);
  if (mesh == "hollow") return build_hollow_cube_mesh(n);
  return load_mesh(mesh);
}

std::vector<StudyRow> run_study(const StudyConfig& config) {
  config.validate();
  const ExactCase c = catalog(config.case_name, config.degree, config.seed);
  const OracleReport oracle = check_derivatives(c);
  if (!oracle.ok())
    throw NumericError("case " + c.name + " fails its derivative check: " + oracle.violations[0]);
  RunOptions opts;
  opts.instance = config.instance;
  opts.solver = config.solver;
  opts.discretization.threads = config.threads;
  opts.discretization.data_degree = config.data_degree;

  auto run_level = [&](int n) {
    StudyRow row;
    row.level = n;
    const PolyMesh mesh = make_mesh(config.mesh, n);
    RunResult r = solve_and_measure(c, mesh, config.degree, opts);
    row.report = r.report;
    row.solver_method = r.solution.method;
    return row;
  };
  std::vector<StudyRow> rows;
  if (config.parallel_meshes) {
    std::vector<std::future<StudyRow>> jobs;
    for (int n : config.levels) jobs.push_back(std::async(std::launch::async, run_level, n));
    for (auto& j : jobs) rows.push_back(j.get());
  } else {
    for (int n : config.levels) rows.push_back(run_level(n));
  }
  return rows;
}

std::string format_csv(const std::vector<StudyRow>& rows) {
  std::string s = ErrorReport::csv_header() + "\n";
  for (const auto& r : rows) s += r.report.csv_row() + "\n";
  return s;
}

std::string format_markdown(const StudyConfig& config, const std::vector<StudyRow>& rows,
                            double floor) {
  const ExactCase c = catalog(config.case_name, config.degree, config.seed);
  std::string s;
  s += fmt::format("# {} on {} meshes, k = {}\n\n", config.case_name, config.mesh, config.degree);
  s += fmt::format("- case: {}\n- instance: {}\n- solver tolerance: {:.1e}\n\n", c.parameters,
                   config.instance, config.solver.rel_tol);

  s += "| n | h | ndof |";
  for (const auto& col : kColumns) s += fmt::format(" {} |", col.label);
  for (const auto& col : kColumns) s += fmt::format(" rate {} |", col.label);
  s += "\n|---|---|---|";
  for (std::size_t i = 0; i < 2 * std::size(kColumns); ++i) s += "---|";
  s += "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ErrorReport& r = rows[i].report;
    s += fmt::format("| {} | {:.4e} | {} |", rows[i].level, r.h, r.ndof);
    for (const auto& col : kColumns) s += fmt::format(" {:.4e} |", r.*col.member);
    for (const auto& col : kColumns) {
      if (i == 0) {
        s += " |";
        continue;
      }
      const ErrorReport& p = rows[i - 1].report;
      s += " " + rate_cell({{p.h, p.*col.member}, {r.h, r.*col.member}}, floor) + " |";
    }
    s += "\n";
  }
  if (rows.size() >= 2) {
    auto summary = [&](const char* label, std::size_t first) {
      s += fmt::format("\n{}:", label);
      for (const auto& col : kColumns) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = first; i < rows.size(); ++i)
          pairs.emplace_back(rows[i].report.h, rows[i].report.*col.member);
        s += fmt::format(" {} {}", col.label, rate_cell(pairs, floor));
        s += col.member == kColumns[std::size(kColumns) - 1].member ? "" : ",";
      }
    };
    s += "\nObserved rates";
    summary("\n- last two levels", rows.size() - 2);
    summary("\n- all levels", 0);
    s += "\n";
  }
  return s;
}

namespace {

void add_common(CLI::App& cmd, StudyConfig& cfg, std::string& solver_name) {
  cmd.add_option("--case", cfg.case_name, "Manufactured case")
      ->check(CLI::IsMember(catalog_names()));
  cmd.add_option("--mesh", cfg.mesh, "Mesh family (tet, hex, hollow) or mesh file");
  cmd.add_option("--levels", cfg.levels, "Refinement levels, e.g. 2,4,8")->delimiter(',');
  cmd.add_option("--degree", cfg.degree, "Polynomial degree k >= 1");
  cmd.add_option("--out", cfg.out, "Output prefix for <out>.csv and <out>.md");
  cmd.add_option("--solver-tol", cfg.solver.rel_tol, "Relative residual tolerance");
  cmd.add_option("--solver", solver_name, "auto, direct or krylov");
  cmd.add_option("--threads", cfg.threads, "Workers for element operators");
  cmd.add_option("--seed", cfg.seed, "Seed of randomized cases");
  cmd.add_option("--instance", cfg.instance, "model, tangential or normal-saddle");
  cmd.add_option("--data-degree", cfg.data_degree, "Quadrature exactness for data integrals");
  cmd.add_flag("--parallel-meshes", cfg.parallel_meshes, "Solve refinement levels concurrently");
}

void emit(const StudyConfig& cfg, const std::vector<StudyRow>& rows, std::ostream& out) {
  const std::string csv = format_csv(rows);
  const std::string md = format_markdown(cfg, rows);
  if (!cfg.out.empty()) {
    write_file(cfg.out + ".csv", csv);
    write_file(cfg.out + ".md", md);
  }
  out << csv << "\n" << md;
}

int cmd_mesh_info(const StudyConfig& cfg, std::ostream& out) {
  const PolyMesh mesh = make_mesh(cfg.mesh, cfg.levels.front());
  const MeshReport rep = validate(mesh);
  out << fmt::format("cells {}\nfaces {} ({} interior, {} boundary)\nvertices {}\n",
                     mesh.num_cells(), mesh.num_faces(), mesh.num_interior_faces(),
                     mesh.num_boundary_faces(), mesh.vertices().size());
  out << fmt::format("h {:.6e}\nvolume {:.15g}\ncavities {}\n", mesh.h(), mesh.total_volume(), mesh.m());
  for (int t = 0; t <= mesh.m(); ++t)
    out << fmt::format("boundary {} area {:.15g}\n", t, mesh.boundary_area(t));
  out << fmt::format("min face area / h_T^2 {:.4e}\nmin cell volume / h_T^3 {:.4e}\nmax chunkiness {:.4e}\n",
                     rep.min_face_area_ratio, rep.min_cell_volume_ratio, rep.max_chunkiness);
  for (const auto& v : rep.violations) out << "violation: " << v << "\n";
  return rep.ok() ? 0 : 2;
}

int cmd_verify_case(const StudyConfig& cfg, std::ostream& out) {
  const ExactCase c = catalog(cfg.case_name, cfg.degree, cfg.seed);
  const OracleReport oracle = check_derivatives(c);
  out << fmt::format("case {}\nparameters: {}\n", c.name, c.parameters);
  out << fmt::format("derivative check: {} (max relative error {:.2e})\n",
                     oracle.ok() ? "pass" : "FAIL", oracle.max_rel_error);
  for (const auto& v : oracle.violations) out << "  " << v << "\n";
  const PolyMesh mesh = make_mesh(cfg.mesh, cfg.levels.front());
  bool ok = oracle.ok();
  for (auto [kind, label] : {std::pair{ProblemKind::Model, "model"},
                             std::pair{ProblemKind::DivCurlNormal, "div-curl"}}) {
    const CompatibilityReport rep = check_compatibility(c, mesh, kind);
    out << fmt::format("compatibility ({}): {} (flux mismatch {:.2e}, max div curl {:.2e})\n", label,
                       rep.ok() ? "pass" : "FAIL", rep.flux_mismatch, rep.max_div_curl);
    for (const auto& v : rep.violations) out << "  " << v << "\n";
    ok = ok && rep.ok();
  }
  const std::vector<double> beta = c.beta(mesh, 2 * cfg.degree + 3);
  for (std::size_t i = 0; i < beta.size(); ++i)
    out << fmt::format("beta_{} {:.15g}\n", i + 1, beta[i]);
  return ok ? 0 : 1;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> injected;
  auto given = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config" && args[i].rfind("--config=", 0) != 0) {
      out.push_back(args[i]);
      continue;
    }
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InputError("--config needs a file");
      path = args[++i];
    } else {
      path = args[i].substr(9);
    }
    std::ifstream f(path);
    if (!f) throw InputError("cannot read config file " + path);
    std::string line;
    for (int lineno = 1; std::getline(f, line); ++lineno) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        const auto e = v.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw InputError(fmt::format("{} line {}: expected key=value", path, lineno));
      const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
      if (given(key)) continue;
      if (key == "parallel-meshes") {
        if (value == "true" || value == "1") injected.push_back("--parallel-meshes");
        continue;
      }
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  // Config values go right after the subcommand so command-line flags keep priority.
  if (!out.empty() && !injected.empty()) out.insert(out.begin() + 1, injected.begin(), injected.end());
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak Galerkin solver for the div-curl model problem", "wgdc"};
  app.require_subcommand(1);
  StudyConfig cfg;
  std::string solver_name = "auto";
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and report errors");
  auto* conv_cmd = app.add_subcommand("convergence", "Refinement study with observed rates");
  auto* mesh_cmd = app.add_subcommand("mesh-info", "Validate a mesh and print its metrics");
  auto* case_cmd = app.add_subcommand("verify-case", "Check a manufactured case");
  for (auto* cmd : {solve_cmd, conv_cmd, mesh_cmd, case_cmd}) {
    add_common(*cmd, cfg, solver_name);
    cmd->add_option("--config", "Flat key=value file; flags override its values");
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
      args = expand_config(args);
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    cfg.solver.method = parse_solver_method(solver_name);
    cfg.validate();
    if (*solve_cmd) {
      StudyConfig one = cfg;
      one.levels = {cfg.levels.front()};
      if (!cfg.mesh_is_family()) one.levels = {1};
      const auto t0 = std::chrono::steady_clock::now();
      const auto rows = run_study(one);
      emit(one, rows, out);
      err << fmt::format("solved with {} in {:.2f} s\n", rows.front().solver_method,
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      return 0;
    }
    if (*conv_cmd) {
      if (cfg.levels.size() < 3) throw InputError("need ≥3 levels for a convergence study");
      if (!cfg.mesh_is_family()) throw InputError("convergence studies need a mesh family (tet, hex, hollow)");
      emit(cfg, run_study(cfg), out);
      return 0;
    }
    if (*mesh_cmd) return cmd_mesh_info(cfg, out);
    if (*case_cmd) return cmd_verify_case(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace wgdc::cli
