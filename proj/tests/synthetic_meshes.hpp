#pragma once

// Procedural test meshes shared by the unit and acceptance suites.

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "coseg/mesh.hpp"

namespace coseg::testmesh {

// Regular tetrahedron with the given edge length, centered at the origin.
inline TriMesh tetrahedron(double edge = 1.0) {
  TriMesh m;
  m.name = "tetrahedron";
  double s = edge / std::sqrt(2.0);
  m.vertices = {Vec3(s / 2, s / 2, s / 2), Vec3(s / 2, -s / 2, -s / 2),
                Vec3(-s / 2, s / 2, -s / 2), Vec3(-s / 2, -s / 2, s / 2)};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

// Unit icosphere by midpoint subdivision of an icosahedron.
// Levels 0..3 give 12, 42, 162, 642 vertices.
inline TriMesh icosphere(int level = 2, double radius = 1.0) {
  TriMesh m;
  m.name = "icosphere" + std::to_string(level);
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  m.vertices = {Vec3(-1, t, 0), Vec3(1, t, 0),  Vec3(-1, -t, 0), Vec3(1, -t, 0),
                Vec3(0, -1, t), Vec3(0, 1, t),  Vec3(0, -1, -t), Vec3(0, 1, -t),
                Vec3(t, 0, -1), Vec3(t, 0, 1),  Vec3(-t, 0, -1), Vec3(-t, 0, 1)};
  for (auto& v : m.vertices) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 p = (m.vertices[a] + m.vertices[b]).normalized();
      m.vertices.push_back(p);
      int id = static_cast<int>(m.vertices.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  if (radius != 1.0)
    for (auto& v : m.vertices) v *= radius;
  return m;
}

// Closed UV sphere: rings*segments + 2 poles vertices.
// rings=18, segments=11 gives exactly 200 vertices.
inline TriMesh uv_sphere(int rings, int segments, double radius = 1.0) {
  TriMesh m;
  m.name = "uvsphere";
  using std::numbers::pi;
  for (int r = 1; r <= rings; ++r) {
    double theta = pi * r / (rings + 1);
    for (int s = 0; s < segments; ++s) {
      double phi = 2.0 * pi * s / segments;
      m.vertices.emplace_back(radius * std::sin(theta) * std::cos(phi),
                              radius * std::sin(theta) * std::sin(phi),
                              radius * std::cos(theta));
    }
  }
  int top = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0, 0, radius);
  int bottom = top + 1;
  m.vertices.emplace_back(0, 0, -radius);
  auto at = [&](int r, int s) { return r * segments + (s % segments); };
  for (int s = 0; s < segments; ++s) {
    m.faces.push_back({top, at(0, s), at(0, s + 1)});
    m.faces.push_back({bottom, at(rings - 1, s + 1), at(rings - 1, s)});
  }
  for (int r = 0; r + 1 < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      m.faces.push_back({at(r, s), at(r + 1, s), at(r + 1, s + 1)});
      m.faces.push_back({at(r, s), at(r + 1, s + 1), at(r, s + 1)});
    }
  return m;
}

// Closed dumbbell as a capped surface of revolution along z: two bulbs of the
// given radii joined by a thin neck. Lobe membership (ground truth) is the
// sign of z.
inline TriMesh dumbbell(double r_left = 1.0, double r_right = 1.0,
                        double neck = 0.25, int along = 40, int around = 16,
                        double half_length = 2.0) {
  TriMesh m;
  m.name = "dumbbell";
  using std::numbers::pi;
  auto profile = [&](double z) {
    // smooth bump on each side plus a constant neck
    double zl = (z + half_length * 0.55) / (half_length * 0.42);
    double zr = (z - half_length * 0.55) / (half_length * 0.42);
    double bl = r_left * std::exp(-zl * zl);
    double br = r_right * std::exp(-zr * zr);
    return neck + bl + br;
  };
  for (int i = 0; i <= along; ++i) {
    double z = -half_length + 2.0 * half_length * i / along;
    double r = profile(z);
    for (int s = 0; s < around; ++s) {
      double phi = 2.0 * pi * s / around;
      m.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
  }
  int cap_l = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0, 0, -half_length - 0.3 * profile(-half_length));
  int cap_r = cap_l + 1;
  m.vertices.emplace_back(0, 0, half_length + 0.3 * profile(half_length));
  auto at = [&](int i, int s) { return i * around + (s % around); };
  for (int i = 0; i < along; ++i)
    for (int s = 0; s < around; ++s) {
      m.faces.push_back({at(i, s), at(i + 1, s), at(i + 1, s + 1)});
      m.faces.push_back({at(i, s), at(i + 1, s + 1), at(i, s + 1)});
    }
  for (int s = 0; s < around; ++s) {
    m.faces.push_back({cap_l, at(0, s + 1), at(0, s)});
    m.faces.push_back({cap_r, at(along, s), at(along, s + 1)});
  }
  return m;
}

// Ground-truth lobe labels for a dumbbell: 0 for z < 0, 1 otherwise.
inline std::vector<int> dumbbell_lobes(const TriMesh& m) {
  std::vector<int> labels(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i)
    labels[i] = m.vertices[i].z() < 0.0 ? 0 : 1;
  return labels;
}

// Two disjoint tetrahedra (2 connected components).
inline TriMesh two_tets() {
  TriMesh a = tetrahedron();
  TriMesh b = tetrahedron();
  int off = a.n_vertices();
  for (auto& v : b.vertices) a.vertices.push_back(v + Vec3(10, 0, 0));
  for (auto& f : b.faces) a.faces.push_back({f[0] + off, f[1] + off, f[2] + off});
  a.name = "two_tets";
  return a;
}

// Deterministic vertex jitter, displacement magnitude = rel * mesh scale
// (bounding-box diagonal).
inline TriMesh jittered(const TriMesh& mesh, double rel, std::uint64_t seed = 7) {
  Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  double scale = (hi - lo).norm();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  TriMesh out = mesh;
  out.name = mesh.name + "_jittered";
  for (auto& v : out.vertices) {
    Vec3 d(gauss(rng), gauss(rng), gauss(rng));
    v += rel * scale * d.normalized();
  }
  return out;
}

// Rigid motion: rotation about a fixed skew axis plus translation.
inline TriMesh rigidly_moved(const TriMesh& mesh) {
  Eigen::AngleAxisd rot(0.83, Vec3(1, 2, 3).normalized());
  Vec3 t(5.0, -3.0, 2.5);
  TriMesh out = mesh;
  out.name = mesh.name + "_moved";
  for (auto& v : out.vertices) v = rot * v + t;
  return out;
}

inline void write_off(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  out << "OFF\n" << mesh.n_vertices() << " " << mesh.n_faces() << " 0\n";
  out.precision(17);
  for (const auto& v : mesh.vertices)
    out << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& f : mesh.faces)
    out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

}  // namespace coseg::testmesh
