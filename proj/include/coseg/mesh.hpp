#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coseg/errors.hpp"

namespace coseg {

using Vec3 = Eigen::Vector3d;

/// Indexed triangle mesh. Immutable after construction; all downstream
/// modules share TriMesh by const reference.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string name;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  double face_area(int f) const;
  double total_area() const;
  double mean_edge_length() const;

  // Number of connected components (vertex adjacency through faces).
  int connected_components() const;

  // Content hash over vertex coordinates and face indices, used to key
  // eigensolve caches and run manifests.
  std::uint64_t content_hash() const;
};

// Validates invariants: index range, distinct corners, face area >= eps_area,
// >= 4 vertices and >= 1 face. Isolated vertices are pruned with a warning to
// stderr. Throws DegenerateGeometry / IndexOutOfRange / ParseError.
TriMesh validate_mesh(TriMesh mesh, double eps_area = 1e-12);

enum class MeshFormat { Off, Obj };

// Loads OFF (ASCII) or OBJ (v/f records, 1-based indices, textures and
// normals ignored). Polygons with more than 3 sides are fan-triangulated.
TriMesh load_mesh(const std::string& path, MeshFormat format);

// Format inferred from the file extension (.off / .obj).
TriMesh load_mesh(const std::string& path);

// Per-vertex lumped masses m_i = sum over incident faces of Area/3.
// Throws IsolatedVertex when a vertex has no incident face.
Eigen::VectorXd vertex_lumped_mass(const TriMesh& mesh);

// Writes an ASCII PLY with per-vertex uchar colors taken from the palette.
void export_labeled_mesh(const TriMesh& mesh, const std::vector<int>& labels,
                         const std::map<int, std::array<std::uint8_t, 3>>& palette,
                         const std::string& path);

}  // namespace coseg
