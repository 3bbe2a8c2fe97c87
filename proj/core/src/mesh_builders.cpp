#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "wgdc/errors.hpp"
#include "wgdc/mesh.hpp"

namespace wgdc {

namespace {

// Cells given as polygon loops of arbitrary orientation; loops are turned outward
// and shared faces are merged by vertex set.
PolyMesh assemble_from_loops(std::vector<Vec3> verts,
                             const std::vector<std::vector<std::vector<int>>>& cell_loops) {
  std::vector<FaceSpec> faces;
  std::vector<std::vector<CellFace>> cells;
  std::map<std::vector<int>, int> face_index;
  cells.reserve(cell_loops.size());
  for (const auto& loops : cell_loops) {
    Vec3 center = Vec3::Zero();
    int count = 0;
    for (const auto& loop : loops)
      for (int v : loop) {
        center += verts[v];
        ++count;
      }
    center /= count;
    std::vector<CellFace> cfs;
    for (auto loop : loops) {
      Vec3 fc = Vec3::Zero();
      Vec3 newell = Vec3::Zero();
      for (std::size_t i = 0; i < loop.size(); ++i) {
        fc += verts[loop[i]];
        newell += verts[loop[i]].cross(verts[loop[(i + 1) % loop.size()]]);
      }
      fc /= static_cast<double>(loop.size());
      if (newell.dot(fc - center) < 0.0) std::reverse(loop.begin(), loop.end());
      std::vector<int> key = loop;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_index.emplace(key, static_cast<int>(faces.size()));
      if (inserted) {
        faces.push_back({loop, -1});
        cfs.push_back({it->second, +1});
      } else {
        cfs.push_back({it->second, -1});
      }
    }
    cells.push_back(std::move(cfs));
  }
  PolyMesh mesh(std::move(verts), std::move(faces), std::move(cells));
  mesh.set_boundary_tags(label_boundary_components(mesh));
  return mesh;
}

std::vector<Vec3> grid_vertices(int n) {
  std::vector<Vec3> v;
  v.reserve(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        v.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n,
                       static_cast<double>(k) / n);
  return v;
}

}  // namespace

PolyMesh build_cube_tet_mesh(int n) {
  if (n < 1) throw InputError("tet mesh needs n >= 1, got " + std::to_string(n));
  auto id = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::vector<std::vector<int>>> cells;
  cells.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> t;
          t[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            t[s + 1] = id(c[0], c[1], c[2]);
          }
          cells.push_back({{t[0], t[1], t[2]}, {t[0], t[1], t[3]}, {t[0], t[2], t[3]},
                           {t[1], t[2], t[3]}});
        }
  return assemble_from_loops(grid_vertices(n), cells);
}

PolyMesh build_cube_hex_mesh(int n, std::optional<CavityBox> cavity) {
  if (n < 1) throw InputError("hex mesh needs n >= 1, got " + std::to_string(n));
  if (cavity) {
    for (int d = 0; d < 3; ++d) {
      if (cavity->lo[d] >= cavity->hi[d])
        throw InputError("cavity box is empty along axis " + std::to_string(d));
      if (cavity->lo[d] < 1 || cavity->hi[d] > n - 1)
        throw InputError("cavity touches the outer boundary along axis " + std::to_string(d));
    }
  }
  auto id = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };
  auto removed = [&](int i, int j, int k) {
    if (!cavity) return false;
    const std::array<int, 3> c{i, j, k};
    for (int d = 0; d < 3; ++d)
      if (c[d] < cavity->lo[d] || c[d] >= cavity->hi[d]) return false;
    return true;
  };
  std::vector<std::vector<std::vector<int>>> cells;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (removed(i, j, k)) continue;
        auto v = [&](int a, int b, int c) { return id(i + a, j + b, k + c); };
        cells.push_back({{v(0, 0, 0), v(0, 1, 0), v(0, 1, 1), v(0, 0, 1)},
                         {v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)},
                         {v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)},
                         {v(0, 1, 0), v(1, 1, 0), v(1, 1, 1), v(0, 1, 1)},
                         {v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(0, 1, 0)},
                         {v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)}});
      }
  return assemble_from_loops(grid_vertices(n), cells);
}

PolyMesh build_hollow_cube_mesh(int n) {
  if (n < 3 || n % 3 != 0)
    throw InputError("hollow cube mesh needs n to be a positive multiple of 3, got " +
                     std::to_string(n));
  const int a = n / 3, b = 2 * n / 3;
  return build_cube_hex_mesh(n, CavityBox{{a, a, a}, {b, b, b}});
}

}  // namespace wgdc
