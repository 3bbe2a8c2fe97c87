#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wgdc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Orthonormal right-handed frame attached to a planar face.
struct FaceFrame {
  Vec3 n;
  Vec3 t1;
  Vec3 t2;
};

/// Deterministic frame for a unit normal: t1 is the normalized projection of
/// the coordinate axis least aligned with n (lowest index on ties), t2 = n x t1.
FaceFrame face_frame(const Vec3& normal);

struct Face {
  std::vector<int> vertices;  // loop; stored normal follows the right-hand rule
  Vec3 normal = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
  double area = 0.0;
  double diameter = 0.0;
  FaceFrame frame;
  int tag = -1;       // -1 interior, otherwise boundary component id
  int owner = -1;     // cell for which the stored normal is outward
  int neighbor = -1;  // second cell, -1 on the boundary
  int ref_count = 0;  // number of cells referencing the face

  bool is_boundary() const { return neighbor < 0; }
};

struct CellFace {
  int face;
  int sign;  // +1 if the stored face normal points out of the cell
};

struct Cell {
  std::vector<CellFace> faces;
  std::vector<int> vertices;  // unique, sorted
  Vec3 centroid = Vec3::Zero();
  double volume = 0.0;
  double diameter = 0.0;
};

/// Input description of a face for PolyMesh construction.
struct FaceSpec {
  std::vector<int> vertices;
  int tag = -1;
};

/// Polyhedral partition of a bounded domain. Immutable after construction.
class PolyMesh {
 public:
  PolyMesh() = default;
  PolyMesh(std::vector<Vec3> vertices, std::vector<FaceSpec> faces,
           std::vector<std::vector<CellFace>> cells);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Face& face(int i) const { return faces_[i]; }
  const Cell& cell(int i) const { return cells_[i]; }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_interior_faces() const;
  int num_boundary_faces() const { return num_faces() - num_interior_faces(); }

  /// Largest cell diameter.
  double h() const { return h_; }
  /// Number of cavity boundary components (boundary tags are 0..m).
  int m() const { return max_tag_ < 0 ? 0 : max_tag_; }
  double total_volume() const;
  /// Outward (domain) normal of a boundary face.
  Vec3 outward_normal(int face) const;
  /// Area of the boundary component with the given tag.
  double boundary_area(int tag) const;

  /// Replace boundary tags. Interior faces must receive -1.
  void set_boundary_tags(const std::vector<int>& tags);

 private:
  void compute_geometry();

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Cell> cells_;
  double h_ = 0.0;
  int max_tag_ = -1;
};

struct MeshReport {
  std::vector<std::string> violations;
  double min_face_area_ratio = 0.0;    // min |e| / h_T^2
  double min_cell_volume_ratio = 0.0;  // min |T| / h_T^3
  double max_chunkiness = 0.0;         // max h_T / inscribed radius estimate
  bool ok() const { return violations.empty(); }
};

/// Checks every structural and geometric mesh invariant. Never throws.
MeshReport validate(const PolyMesh& mesh);

/// Edge-connected components of the boundary; component 0 is the one whose
/// bounding box has the largest extent. Returns one tag per face (-1 interior).
std::vector<int> label_boundary_components(const PolyMesh& mesh);

/// Uniform partition of [0,1]^3 into 6 n^3 tetrahedra (Kuhn split of each sub-cube).
PolyMesh build_cube_tet_mesh(int n);

/// Index box [lo, hi) of removed sub-cubes.
struct CavityBox {
  std::array<int, 3> lo;
  std::array<int, 3> hi;
};

/// Uniform hexahedral partition of [0,1]^3, optionally with an interior cavity.
PolyMesh build_cube_hex_mesh(int n, std::optional<CavityBox> cavity = std::nullopt);

/// Hexahedral mesh of [0,1]^3 minus [1/3,2/3]^3; n must be a multiple of 3.
PolyMesh build_hollow_cube_mesh(int n);

PolyMesh load_mesh(const std::filesystem::path& path);
PolyMesh parse_mesh(const std::string& text);
std::string format_mesh(const PolyMesh& mesh);
void save_mesh(const PolyMesh& mesh, const std::filesystem::path& path);

}  // namespace wgdc
