#include "wgdc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include <Eigen/Geometry>

#include "wgdc/errors.hpp"

namespace wgdc {

namespace {

double max_pairwise_distance(const std::vector<Vec3>& pts, const std::vector<int>& ids) {
  double d = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      d = std::max(d, (pts[ids[i]] - pts[ids[j]]).norm());
  return d;
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

// Signed volumes of the tets (apex, face centroid, v_i, v_{i+1}) for one face of a cell.
template <class Fn>
void for_each_fan_tet(const std::vector<Vec3>& verts, const Face& f, int sign, const Vec3& apex,
                      Fn&& fn) {
  const std::size_t nv = f.vertices.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec3& a = verts[f.vertices[i]];
    const Vec3& b = verts[f.vertices[(i + 1) % nv]];
    const double vol = sign * det3(f.centroid - apex, a - apex, b - apex) / 6.0;
    fn(vol, (apex + f.centroid + a + b) / 4.0);
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Union-find roots over boundary faces joined by shared edges; -1 for interior faces.
std::vector<int> boundary_edge_components(const PolyMesh& mesh) {
  const int nf = mesh.num_faces();
  UnionFind uf(nf);
  std::map<std::pair<int, int>, int> first_face_on_edge;
  for (int f = 0; f < nf; ++f) {
    const Face& face = mesh.face(f);
    if (face.ref_count != 1) continue;
    const std::size_t nv = face.vertices.size();
    for (std::size_t i = 0; i < nv; ++i) {
      int a = face.vertices[i];
      int b = face.vertices[(i + 1) % nv];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = first_face_on_edge.emplace(std::make_pair(a, b), f);
      if (!inserted) uf.unite(it->second, f);
    }
  }
  std::vector<int> root(nf, -1);
  for (int f = 0; f < nf; ++f)
    if (mesh.face(f).ref_count == 1) root[f] = uf.find(f);
  return root;
}

double bbox_extent(const PolyMesh& mesh, const std::vector<int>& faces) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = -lo;
  for (int f : faces)
    for (int v : mesh.face(f).vertices) {
      lo = lo.cwiseMin(mesh.vertices()[v]);
      hi = hi.cwiseMax(mesh.vertices()[v]);
    }
  return (hi - lo).norm();
}

}  // namespace

FaceFrame face_frame(const Vec3& normal) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(normal[i]) < std::abs(normal[axis])) axis = i;
  Vec3 e = Vec3::Unit(axis);
  Vec3 t1 = (e - e.dot(normal) * normal).normalized();
  return {normal, t1, normal.cross(t1)};
}

PolyMesh::PolyMesh(std::vector<Vec3> vertices, std::vector<FaceSpec> faces,
                   std::vector<std::vector<CellFace>> cells)
    : vertices_(std::move(vertices)) {
  faces_.reserve(faces.size());
  for (auto& fs : faces) {
    Face f;
    f.vertices = std::move(fs.vertices);
    f.tag = fs.tag;
    faces_.push_back(std::move(f));
  }
  cells_.reserve(cells.size());
  for (auto& cf : cells) {
    Cell c;
    c.faces = std::move(cf);
    cells_.push_back(std::move(c));
  }
  compute_geometry();
}

void PolyMesh::compute_geometry() {
  const int nv = static_cast<int>(vertices_.size());
  for (auto& f : faces_) {
    for (int v : f.vertices)
      if (v < 0 || v >= nv) throw InputError("face references vertex " + std::to_string(v) +
                                             " out of range");
    if (f.vertices.size() < 3) throw InputError("face with fewer than 3 vertices");
    Vec3 newell = Vec3::Zero();
    Vec3 mean = Vec3::Zero();
    const std::size_t k = f.vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
      newell += vertices_[f.vertices[i]].cross(vertices_[f.vertices[(i + 1) % k]]);
      mean += vertices_[f.vertices[i]];
    }
    mean /= static_cast<double>(k);
    const double len = newell.norm();
    f.area = 0.5 * len;
    f.normal = len > 0.0 ? Vec3(newell / len) : Vec3::Zero();
    // Area centroid through the fan about the vertex mean.
    double a_sum = 0.0;
    Vec3 c_sum = Vec3::Zero();
    for (std::size_t i = 0; i < k; ++i) {
      const Vec3& a = vertices_[f.vertices[i]];
      const Vec3& b = vertices_[f.vertices[(i + 1) % k]];
      const double ai = 0.5 * (a - mean).cross(b - mean).dot(f.normal);
      a_sum += ai;
      c_sum += ai * (mean + a + b) / 3.0;
    }
    f.centroid = std::abs(a_sum) > 0.0 ? Vec3(c_sum / a_sum) : mean;
    f.diameter = max_pairwise_distance(vertices_, f.vertices);
    f.frame = len > 0.0 ? face_frame(f.normal) : FaceFrame{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    f.owner = f.neighbor = -1;
    f.ref_count = 0;
  }

  const int nf = static_cast<int>(faces_.size());
  std::vector<std::vector<std::pair<int, int>>> refs(nf);
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c)
    for (const auto& cf : cells_[c].faces) {
      if (cf.face < 0 || cf.face >= nf)
        throw InputError("cell " + std::to_string(c) + " references face " +
                         std::to_string(cf.face) + " out of range");
      refs[cf.face].emplace_back(c, cf.sign);
    }
  for (int f = 0; f < nf; ++f) {
    auto& r = refs[f];
    Face& face = faces_[f];
    face.ref_count = static_cast<int>(r.size());
    if (r.empty()) continue;
    if (r.size() == 1) {
      face.owner = r[0].first;
      continue;
    }
    auto pos = std::find_if(r.begin(), r.begin() + 2, [](auto& p) { return p.second > 0; });
    const std::size_t o = pos == r.begin() + 2 ? 0 : static_cast<std::size_t>(pos - r.begin());
    face.owner = r[o].first;
    face.neighbor = r[1 - o].first;
  }

  h_ = 0.0;
  for (auto& cell : cells_) {
    std::vector<int> vs;
    for (const auto& cf : cell.faces)
      vs.insert(vs.end(), faces_[cf.face].vertices.begin(), faces_[cf.face].vertices.end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    cell.vertices = vs;
    Vec3 apex = Vec3::Zero();
    for (int v : vs) apex += vertices_[v];
    apex /= static_cast<double>(std::max<std::size_t>(vs.size(), 1));
    double vol = 0.0;
    Vec3 moment = Vec3::Zero();
    for (const auto& cf : cell.faces)
      for_each_fan_tet(vertices_, faces_[cf.face], cf.sign, apex, [&](double v, const Vec3& c) {
        vol += v;
        moment += v * c;
      });
    cell.volume = vol;
    cell.centroid = vol != 0.0 ? Vec3(moment / vol) : apex;
    cell.diameter = max_pairwise_distance(vertices_, vs);
    h_ = std::max(h_, cell.diameter);
  }

  max_tag_ = -1;
  for (const auto& f : faces_) max_tag_ = std::max(max_tag_, f.tag);
}

int PolyMesh::num_interior_faces() const {
  return static_cast<int>(
      std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return f.ref_count == 2; }));
}

double PolyMesh::total_volume() const {
  double v = 0.0;
  for (const auto& c : cells_) v += c.volume;
  return v;
}

Vec3 PolyMesh::outward_normal(int face) const {
  const Face& f = faces_[face];
  for (const auto& cf : cells_[f.owner].faces)
    if (cf.face == face) return cf.sign * f.normal;
  return f.normal;
}

double PolyMesh::boundary_area(int tag) const {
  double a = 0.0;
  for (const auto& f : faces_)
    if (f.is_boundary() && f.tag == tag) a += f.area;
  return a;
}

void PolyMesh::set_boundary_tags(const std::vector<int>& tags) {
  if (tags.size() != faces_.size()) throw InputError("boundary tag vector has wrong length");
  max_tag_ = -1;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    faces_[f].tag = tags[f];
    max_tag_ = std::max(max_tag_, tags[f]);
  }
}

std::vector<int> label_boundary_components(const PolyMesh& mesh) {
  const std::vector<int> root = boundary_edge_components(mesh);
  std::map<int, std::vector<int>> groups;  // keyed by root = smallest face index
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (root[f] >= 0) groups[root[f]].push_back(f);

  std::vector<std::pair<int, double>> extents;
  for (auto& [r, fs] : groups) extents.emplace_back(r, bbox_extent(mesh, fs));
  auto outer = std::max_element(extents.begin(), extents.end(),
                                [](auto& a, auto& b) { return a.second < b.second; });
  std::vector<int> tags(mesh.num_faces(), -1);
  int next = 1;
  for (auto& [r, ext] : extents) {
    const int tag = (r == outer->first) ? 0 : next++;
    for (int f : groups[r]) tags[f] = tag;
  }
  return tags;
}

MeshReport validate(const PolyMesh& mesh) {
  MeshReport rep;
  auto flag = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };
  const auto& verts = mesh.vertices();

  std::vector<double> face_scale(mesh.num_faces(), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (const auto& cf : mesh.cell(c).faces)
      face_scale[cf.face] = std::max(face_scale[cf.face], mesh.cell(c).diameter);

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const std::string id = "face " + std::to_string(f);
    if (face.ref_count > 2)
      flag("nonmanifold face: " + id + " referenced by " + std::to_string(face.ref_count) +
           " cells");
    if (face.ref_count == 0) flag("orphan face: " + id + " is not referenced by any cell");
    if (face.ref_count == 1 && face.tag < 0)
      flag("untagged boundary face: " + id + " has no component tag");
    if (face.ref_count == 2 && face.tag >= 0)
      flag("tagged interior face: " + id + " carries boundary tag " + std::to_string(face.tag));

    const double scale = face_scale[f] > 0.0 ? face_scale[f] : face.diameter;
    if (!(face.area > 1e-14 * scale * scale)) {
      flag("degenerate face: " + id + " has area " + std::to_string(face.area));
      continue;
    }
    if (std::abs(face.normal.norm() - 1.0) > 1e-14) flag("non-unit normal: " + id);
    double dev = 0.0;
    for (int v : face.vertices) dev = std::max(dev, std::abs((verts[v] - face.centroid).dot(face.normal)));
    if (dev > 1e-12 * scale) flag("non-planar face: " + id + " deviates by " + std::to_string(dev));
  }

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.ref_count != 2) continue;
    int s_owner = 0, s_neighbor = 0;
    for (const auto& cf : mesh.cell(face.owner).faces)
      if (cf.face == f) s_owner = cf.sign;
    for (const auto& cf : mesh.cell(face.neighbor).faces)
      if (cf.face == f) s_neighbor = cf.sign;
    if (s_owner == s_neighbor)
      flag("normal not outward: interior face " + std::to_string(f) +
           " has equal orientation signs in cells " + std::to_string(face.owner) + " and " +
           std::to_string(face.neighbor));
  }

  double min_area_ratio = std::numeric_limits<double>::max();
  double min_vol_ratio = std::numeric_limits<double>::max();
  double max_chunk = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const std::string id = "cell " + std::to_string(c);
    const double hT = cell.diameter;
    bool inverted = false;
    bool not_star = false;
    Vec3 flux = Vec3::Zero();
    double inradius = std::numeric_limits<double>::max();
    for (const auto& cf : cell.faces) {
      const Face& face = mesh.face(cf.face);
      if (cf.sign != 1 && cf.sign != -1) flag("invalid orientation sign in " + id);
      flux += cf.sign * face.area * face.normal;
      min_area_ratio = std::min(min_area_ratio, face.area / (hT * hT));
      int neg = 0, pos = 0;
      for_each_fan_tet(verts, face, cf.sign, cell.centroid, [&](double v, const Vec3&) {
        if (v > 1e-14 * hT * hT * hT) ++pos;
        else ++neg;
      });
      if (pos == 0) inverted = true;
      else if (neg > 0) not_star = true;
      inradius = std::min(inradius, std::abs((face.centroid - cell.centroid).dot(face.normal)));
    }
    if (inverted) flag("normal not outward: " + id + " has a face whose normal points inward");
    if (not_star) flag("not star-shaped: " + id + " w.r.t. its centroid");
    if (flux.norm() > 1e-12 * hT * hT) flag("open cell: " + id + " face fluxes do not close");
    if (!(cell.volume > 0.0)) flag("non-positive volume: " + id);
    min_vol_ratio = std::min(min_vol_ratio, cell.volume / (hT * hT * hT));
    if (inradius > 0.0) max_chunk = std::max(max_chunk, hT / inradius);
  }
  rep.min_face_area_ratio = mesh.num_cells() ? min_area_ratio : 0.0;
  rep.min_cell_volume_ratio = mesh.num_cells() ? min_vol_ratio : 0.0;
  rep.max_chunkiness = max_chunk;

  // Volume enclosed by the boundary versus the sum of the cells.
  double enclosed = 0.0;
  bool have_boundary = false;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.ref_count != 1 || face.owner < 0) continue;
    have_boundary = true;
    enclosed += face.area * face.centroid.dot(mesh.outward_normal(f)) / 3.0;
  }
  const double cells = mesh.total_volume();
  if (have_boundary && std::abs(enclosed - cells) > 1e-10 * std::abs(enclosed))
    flag("volume mismatch: cells sum to " + std::to_string(cells) + " but boundary encloses " +
         std::to_string(enclosed));

  // Each boundary tag must be one edge-connected piece, and tag 0 the outermost.
  const std::vector<int> root = boundary_edge_components(mesh);
  std::map<int, std::set<int>> roots_of_tag;
  std::map<int, std::set<int>> tags_of_root;
  std::map<int, std::vector<int>> faces_of_tag;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (root[f] < 0 || mesh.face(f).tag < 0) continue;
    roots_of_tag[mesh.face(f).tag].insert(root[f]);
    tags_of_root[root[f]].insert(mesh.face(f).tag);
    faces_of_tag[mesh.face(f).tag].push_back(f);
  }
  for (auto& [tag, rs] : roots_of_tag)
    if (rs.size() > 1)
      flag("disconnected boundary component: tag " + std::to_string(tag) + " spans " +
           std::to_string(rs.size()) + " pieces");
  for (auto& [r, ts] : tags_of_root)
    if (ts.size() > 1) flag("boundary piece carries multiple component tags");
  if (!faces_of_tag.empty()) {
    if (!faces_of_tag.count(0)) {
      flag("boundary component 0 is missing");
    } else {
      const double outer = bbox_extent(mesh, faces_of_tag[0]);
      for (auto& [tag, fs] : faces_of_tag)
        if (tag != 0 && bbox_extent(mesh, fs) > outer * (1.0 + 1e-12))
          flag("boundary component 0 is not the exterior boundary (tag " + std::to_string(tag) +
               " is larger)");
    }
  }
  return rep;
}

}  // namespace wgdc
