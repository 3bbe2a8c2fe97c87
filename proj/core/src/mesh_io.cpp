#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "wgdc/errors.hpp"
#include "wgdc/mesh.hpp"

namespace wgdc {

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  // Next non-blank, non-comment line split into tokens.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      std::vector<std::string> toks;
      for (std::string t; ss >> t;) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    throw InputError(fmt::format("line {}: unexpected end of file, expected {}", line_no_, what));
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(fmt::format("line {}: {}", line_no_, msg));
  }

  long to_int(const std::string& tok) const {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      fail("expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) fail("expected integer, got '" + tok + "'");
    return v;
  }

  double to_double(const std::string& tok) const {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      fail("expected number, got '" + tok + "'");
    }
    if (pos != tok.size()) fail("expected number, got '" + tok + "'");
    return v;
  }

  int section(const char* name) {
    auto toks = next(name);
    if (toks.size() != 2 || toks[0] != name)
      fail(fmt::format("expected section header '{} N'", name));
    const long n = to_int(toks[1]);
    if (n < 0) fail("negative section size");
    return static_cast<int>(n);
  }

 private:
  std::istringstream in_;
  int line_no_ = 0;
};

}  // namespace

PolyMesh parse_mesh(const std::string& text) {
  LineReader r(text);
  auto header = r.next("header");
  if (header.size() != 2 || header[0] != "wgmesh" || header[1] != "1")
    r.fail("expected header 'wgmesh 1'");

  const int nv = r.section("vertices");
  std::vector<Vec3> verts(nv);
  for (int i = 0; i < nv; ++i) {
    auto t = r.next("vertex");
    if (t.size() != 3) r.fail("vertex line needs 3 coordinates");
    verts[i] = Vec3(r.to_double(t[0]), r.to_double(t[1]), r.to_double(t[2]));
  }

  const int nf = r.section("faces");
  std::vector<FaceSpec> faces(nf);
  for (int i = 0; i < nf; ++i) {
    auto t = r.next("face");
    const long k = r.to_int(t[0]);
    if (k < 3) r.fail("face needs at least 3 vertices");
    if (static_cast<long>(t.size()) != k + 2) r.fail("face line must be 'k v1 ... vk tag'");
    for (long j = 0; j < k; ++j) {
      const long v = r.to_int(t[1 + j]);
      if (v < 0 || v >= nv) r.fail(fmt::format("vertex index {} out of range", v));
      faces[i].vertices.push_back(static_cast<int>(v));
    }
    faces[i].tag = static_cast<int>(r.to_int(t[k + 1]));
    if (faces[i].tag < -1) r.fail("face tag must be -1 or a component id");
  }

  const int nc = r.section("cells");
  std::vector<std::vector<CellFace>> cells(nc);
  for (int i = 0; i < nc; ++i) {
    auto t = r.next("cell");
    const long k = r.to_int(t[0]);
    if (k < 4) r.fail("cell needs at least 4 faces");
    if (static_cast<long>(t.size()) != k + 1) r.fail("cell line must be 'k f1 ... fk'");
    for (long j = 0; j < k; ++j) {
      const std::string& tok = t[1 + j];
      const bool negative = !tok.empty() && tok[0] == '-';
      const long f = r.to_int(negative ? tok.substr(1) : tok);
      if (f < 0 || f >= nf) r.fail(fmt::format("face index {} out of range", f));
      cells[i].push_back({static_cast<int>(f), negative ? -1 : +1});
    }
  }

  PolyMesh mesh(std::move(verts), std::move(faces), std::move(cells));
  MeshReport rep = validate(mesh);
  if (!rep.ok()) throw InputError("mesh validation failed: " + rep.violations.front());
  return mesh;
}

PolyMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_mesh(ss.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string format_mesh(const PolyMesh& mesh) {
  std::string out = "wgmesh 1\n";
  out += fmt::format("vertices {}\n", mesh.vertices().size());
  for (const auto& v : mesh.vertices()) out += fmt::format("{:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
  out += fmt::format("faces {}\n", mesh.num_faces());
  for (const auto& f : mesh.faces()) {
    out += fmt::format("{}", f.vertices.size());
    for (int v : f.vertices) out += fmt::format(" {}", v);
    out += fmt::format(" {}\n", f.tag);
  }
  out += fmt::format("cells {}\n", mesh.num_cells());
  for (const auto& c : mesh.cells()) {
    out += fmt::format("{}", c.faces.size());
    for (const auto& cf : c.faces) out += fmt::format(" {}{}", cf.sign < 0 ? "-" : "", cf.face);
    out += '\n';
  }
  return out;
}

void save_mesh(const PolyMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write mesh file " + path.string());
  out << format_mesh(mesh);
}

}  // namespace wgdc
