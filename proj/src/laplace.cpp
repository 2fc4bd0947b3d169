#include "coseg/laplace.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <vector>

namespace coseg {

namespace {

// Uniform hash grid over vertex positions, cell size = interaction radius.
struct PointGrid {
  double cell;
  Vec3 origin;
  std::unordered_map<std::int64_t, std::vector<int>> cells;

  PointGrid(const std::vector<Vec3>& pts, double cell_size) : cell(cell_size) {
    origin = pts.empty() ? Vec3::Zero() : pts[0];
    for (const auto& p : pts) origin = origin.cwiseMin(p);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
      cells[key_of(pts[i])].push_back(i);
  }

  std::int64_t key_of(const Vec3& p) const {
    auto c = [&](int ax) {
      return static_cast<std::int64_t>(std::floor((p[ax] - origin[ax]) / cell));
    };
    // 21 bits per axis is plenty for any sane mesh extent / radius ratio
    return (c(0) & 0x1FFFFF) | ((c(1) & 0x1FFFFF) << 21) | ((c(2) & 0x1FFFFF) << 42);
  }

  template <typename F>
  void for_neighbors(const Vec3& p, F&& fn) const {
    auto base = [&](int ax) {
      return static_cast<std::int64_t>(std::floor((p[ax] - origin[ax]) / cell));
    };
    std::int64_t bx = base(0), by = base(1), bz = base(2);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          std::int64_t k = ((bx + dx) & 0x1FFFFF) | (((by + dy) & 0x1FFFFF) << 21) |
                           (((bz + dz) & 0x1FFFFF) << 42);
          auto it = cells.find(k);
          if (it == cells.end()) continue;
          for (int j : it->second) fn(j);
        }
  }
};

}  // namespace

LaplaceSystem build_laplace(const TriMesh& mesh, double h_factor,
                            double truncation_epsilon) {
  const int n = mesh.n_vertices();
  const Eigen::VectorXd m = vertex_lumped_mass(mesh);
  const double mel = mesh.mean_edge_length();
  const double h = h_factor * mel * mel;
  const double norm = 1.0 / (4.0 * std::numbers::pi * h * h);

  const bool truncate = truncation_epsilon > 0.0 && truncation_epsilon < 1.0;
  const double r2_max =
      truncate ? 4.0 * h * std::log(1.0 / truncation_epsilon)
               : std::numeric_limits<double>::infinity();

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  std::int64_t nnz = n;  // diagonal always stored

  auto accumulate_pair = [&](int i, int j, double d2) {
    double s = m[i] * m[j] * norm * std::exp(-d2 / (4.0 * h));
    trips.emplace_back(i, j, -s);
    trips.emplace_back(j, i, -s);
    diag[i] += s;
    diag[j] += s;
    nnz += 2;
  };

  if (truncate && std::isfinite(r2_max)) {
    PointGrid grid(mesh.vertices, std::sqrt(r2_max));
    for (int i = 0; i < n; ++i) {
      grid.for_neighbors(mesh.vertices[i], [&](int j) {
        if (j <= i) return;
        double d2 = (mesh.vertices[i] - mesh.vertices[j]).squaredNorm();
        if (d2 <= r2_max) accumulate_pair(i, j, d2);
      });
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        accumulate_pair(i, j, (mesh.vertices[i] - mesh.vertices[j]).squaredNorm());
  }

  for (int i = 0; i < n; ++i) {
    if (diag[i] == 0.0)
      throw EmptyKernelRow("vertex " + std::to_string(i) +
                           " has an all-zero truncated kernel row; raise h_factor "
                           "or truncation_epsilon");
    trips.emplace_back(i, i, diag[i]);
  }

  LaplaceSystem sys;
  sys.stiffness.resize(n, n);
  sys.stiffness.setFromTriplets(trips.begin(), trips.end());
  sys.mass = m;
  sys.bandwidth = h;
  sys.truncation_epsilon = truncate ? truncation_epsilon : 0.0;
  sys.kernel_nnz = nnz;
  return sys;
}

Eigen::VectorXd apply_laplace_direct(const TriMesh& mesh, double h,
                                     const Eigen::VectorXd& f) {
  const int n = mesh.n_vertices();
  if (f.size() != n) throw LengthMismatch("function length != vertex count");
  const double norm = 1.0 / (4.0 * std::numbers::pi * h * h);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (int w = 0; w < n; ++w) {
    double acc = 0.0;
    for (int x = 0; x < mesh.n_faces(); ++x) {
      double face_term = mesh.face_area(x) / 3.0;
      for (int e = 0; e < 3; ++e) {
        int p = mesh.faces[x][e];
        double d2 = (mesh.vertices[p] - mesh.vertices[w]).squaredNorm();
        acc += face_term * std::exp(-d2 / (4.0 * h)) * (f[p] - f[w]);
      }
    }
    g[w] = norm * acc;
  }
  return g;
}

void dump_matrix_market(const LaplaceSystem& sys, const std::string& stiffness_path,
                        const std::string& mass_path) {
  {
    std::ofstream out(stiffness_path);
    if (!out) throw IoError("cannot write " + stiffness_path);
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    std::int64_t lower = 0;
    for (int k = 0; k < sys.stiffness.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it)
        if (it.row() >= it.col()) ++lower;
    out << sys.size() << " " << sys.size() << " " << lower << "\n";
    out.precision(17);
    for (int k = 0; k < sys.stiffness.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it)
        if (it.row() >= it.col())
          out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
  }
  {
    std::ofstream out(mass_path);
    if (!out) throw IoError("cannot write " + mass_path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << sys.size() << " " << sys.size() << " " << sys.size() << "\n";
    out.precision(17);
    for (int i = 0; i < sys.size(); ++i)
      out << i + 1 << " " << i + 1 << " " << sys.mass[i] << "\n";
  }
}

}  // namespace coseg
