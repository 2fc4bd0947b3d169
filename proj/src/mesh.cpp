#include "coseg/mesh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace coseg {

double TriMesh::face_area(int f) const {
  const auto& t = faces[f];
  const Vec3& a = vertices[t[0]];
  const Vec3& b = vertices[t[1]];
  const Vec3& c = vertices[t[2]];
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (int f = 0; f < n_faces(); ++f) s += face_area(f);
  return s;
}

double TriMesh::mean_edge_length() const {
  double s = 0.0;
  std::int64_t cnt = 0;
  for (const auto& t : faces) {
    for (int e = 0; e < 3; ++e) {
      s += (vertices[t[e]] - vertices[t[(e + 1) % 3]]).norm();
      ++cnt;
    }
  }
  return cnt ? s / static_cast<double>(cnt) : 0.0;
}

int TriMesh::connected_components() const {
  std::vector<int> parent(vertices.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& t : faces) {
    int a = find(t[0]);
    parent[find(t[1])] = a;
    parent[find(t[2])] = a;
  }
  int comps = 0;
  for (size_t i = 0; i < parent.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++comps;
  return comps;
}

std::uint64_t TriMesh::content_hash() const {
  // FNV-1a over raw coordinate and index bytes.
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : vertices) mix(v.data(), 3 * sizeof(double));
  for (const auto& f : faces) mix(f.data(), 3 * sizeof(int));
  return h;
}

TriMesh validate_mesh(TriMesh mesh, double eps_area) {
  const int nv = mesh.n_vertices();
  for (const auto& t : mesh.faces) {
    for (int e = 0; e < 3; ++e)
      if (t[e] < 0 || t[e] >= nv)
        throw IndexOutOfRange("face index " + std::to_string(t[e]) +
                              " out of range [0, " + std::to_string(nv) + ")");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw DegenerateGeometry("face with repeated vertex index");
  }
  for (int f = 0; f < mesh.n_faces(); ++f)
    if (mesh.face_area(f) < eps_area)
      throw DegenerateGeometry("degenerate face " + std::to_string(f) +
                               " with area below " + std::to_string(eps_area));

  std::vector<bool> used(nv, false);
  for (const auto& t : mesh.faces)
    for (int e = 0; e < 3; ++e) used[t[e]] = true;
  int n_isolated = static_cast<int>(std::count(used.begin(), used.end(), false));
  if (n_isolated > 0) {
    std::cerr << "[coseg] warning: pruning " << n_isolated
              << " isolated vertices from " << mesh.name << "\n";
    std::vector<int> remap(nv, -1);
    std::vector<Vec3> kept;
    kept.reserve(nv - n_isolated);
    for (int i = 0; i < nv; ++i)
      if (used[i]) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(mesh.vertices[i]);
      }
    mesh.vertices = std::move(kept);
    for (auto& t : mesh.faces)
      for (int e = 0; e < 3; ++e) t[e] = remap[t[e]];
  }

  if (mesh.n_vertices() < 4)
    throw ParseError("mesh has fewer than 4 vertices");
  if (mesh.n_faces() < 1) throw ParseError("mesh has no faces");
  return mesh;
}

namespace {

// Fan-triangulates a polygon given as a vertex-index list.
void emit_fan(const std::vector<int>& poly, std::vector<std::array<int, 3>>& out) {
  if (poly.size() < 3) throw ParseError("face with fewer than 3 vertices");
  for (size_t i = 1; i + 1 < poly.size(); ++i)
    out.push_back({poly[0], poly[static_cast<int>(i)], poly[i + 1]});
}

TriMesh load_off(std::istream& in, const std::string& name) {
  std::string tok;
  if (!(in >> tok) || tok != "OFF") throw ParseError(name + ": missing OFF header");
  long nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne) || nv < 0 || nf < 0)
    throw ParseError(name + ": malformed OFF counts");
  TriMesh mesh;
  mesh.name = name;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    double x, y, z;
    if (!(in >> x >> y >> z)) throw ParseError(name + ": truncated vertex list");
    mesh.vertices.emplace_back(x, y, z);
  }
  for (long f = 0; f < nf; ++f) {
    int deg;
    if (!(in >> deg) || deg < 3) throw ParseError(name + ": bad face degree");
    std::vector<int> poly(deg);
    for (int e = 0; e < deg; ++e)
      if (!(in >> poly[e])) throw ParseError(name + ": truncated face list");
    emit_fan(poly, mesh.faces);
  }
  return mesh;
}

TriMesh load_obj(std::istream& in, const std::string& name) {
  TriMesh mesh;
  mesh.name = name;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw ParseError(name + ": malformed v record");
      mesh.vertices.emplace_back(x, y, z);
    } else if (kind == "f") {
      std::vector<int> poly;
      std::string ref;
      while (ls >> ref) {
        // "i", "i/t", "i/t/n", "i//n" — only the vertex index matters.
        size_t slash = ref.find('/');
        int idx = 0;
        try {
          idx = std::stoi(slash == std::string::npos ? ref : ref.substr(0, slash));
        } catch (const std::exception&) {
          throw ParseError(name + ": malformed f record '" + ref + "'");
        }
        if (idx == 0) throw ParseError(name + ": zero face index");
        // 1-based; negative indices count from the end.
        poly.push_back(idx > 0 ? idx - 1
                               : static_cast<int>(mesh.vertices.size()) + idx);
      }
      emit_fan(poly, mesh.faces);
    }
    // everything else (vn, vt, comments, groups) ignored
  }
  return mesh;
}

}  // namespace

TriMesh load_mesh(const std::string& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  TriMesh raw = (format == MeshFormat::Off) ? load_off(in, path) : load_obj(in, path);
  return validate_mesh(std::move(raw));
}

TriMesh load_mesh(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == "off") return load_mesh(path, MeshFormat::Off);
  if (ext == "obj") return load_mesh(path, MeshFormat::Obj);
  throw ParseError("unrecognized mesh extension: " + path);
}

Eigen::VectorXd vertex_lumped_mass(const TriMesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    double third = mesh.face_area(f) / 3.0;
    for (int e = 0; e < 3; ++e) m[mesh.faces[f][e]] += third;
  }
  for (int i = 0; i < m.size(); ++i)
    if (m[i] <= 0.0)
      throw IsolatedVertex("vertex " + std::to_string(i) + " has no incident face");
  return m;
}

void export_labeled_mesh(const TriMesh& mesh, const std::vector<int>& labels,
                         const std::map<int, std::array<std::uint8_t, 3>>& palette,
                         const std::string& path) {
  if (static_cast<int>(labels.size()) != mesh.n_vertices())
    throw LengthMismatch("labels/vertices count mismatch");
  for (int l : labels)
    if (!palette.count(l))
      throw MissingPaletteEntry("no palette entry for label " + std::to_string(l));

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.n_vertices() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "element face " << mesh.n_faces() << "\n";
  out << "property list uchar int vertex_indices\nend_header\n";
  out.precision(9);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const auto& c = palette.at(labels[i]);
    out << mesh.vertices[i].x() << " " << mesh.vertices[i].y() << " "
        << mesh.vertices[i].z() << " " << int(c[0]) << " " << int(c[1]) << " "
        << int(c[2]) << "\n";
  }
  for (const auto& t : mesh.faces)
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace coseg
