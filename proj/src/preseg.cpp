#include "coseg/preseg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

namespace coseg {

Embedding spectral_embedding(const SpectralBasis& basis, int k_embed) {
  if (k_embed < 1) throw KTooLarge("k_embed must be positive");
  if (basis.k() < k_embed + 1)
    throw KTooLarge("basis has " + std::to_string(basis.k()) +
                    " pairs, need k_embed + 1 = " + std::to_string(k_embed + 1));
  // lambda_2 ~ 0 means a second constant mode: disconnected mesh
  if (basis.eigenvalues[1] <= 1e-9 * basis.eigenvalues[basis.k() - 1] ||
      basis.eigenvalues[1] <= 0.0)
    throw DisconnectedMesh(
        "lambda_2 is numerically zero; split connected components first");

  Embedding emb;
  emb.k_embed = k_embed;
  emb.coords.resize(basis.n(), k_embed);
  for (int j = 0; j < k_embed; ++j)
    emb.coords.col(j) =
        basis.eigenvectors.col(j + 1) / std::sqrt(basis.eigenvalues[j + 1]);
  return emb;
}

namespace {

// Nearest center, ties to the lowest index.
int nearest_center(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& p) {
  int best = 0;
  double best_d = (centers.row(0) - p).squaredNorm();
  for (int c = 1; c < centers.rows(); ++c) {
    double d = (centers.row(c) - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& pts, int k,
                              std::mt19937_64& rng) {
  const int m = static_cast<int>(pts.rows());
  Eigen::MatrixXd centers(k, pts.cols());
  std::uniform_int_distribution<int> first(0, m - 1);
  centers.row(0) = pts.row(first(rng));
  Eigen::VectorXd d2 = (pts.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = d2.sum();
    int pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng), acc = 0.0;
      for (int i = 0; i < m; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);  // all points coincide with chosen centers
    }
    centers.row(c) = pts.row(pick);
    d2 = d2.cwiseMin((pts.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

std::vector<int> kmeans(const Eigen::MatrixXd& points, const KMeansParams& params) {
  const int m = static_cast<int>(points.rows());
  const int k = params.n_clusters;
  if (k < 1) throw TooFewPoints("n_clusters must be positive");
  if (k > m)
    throw TooFewPoints("n_clusters = " + std::to_string(k) + " exceeds " +
                       std::to_string(m) + " points");

  std::mt19937_64 rng(params.seed);
  std::vector<int> best_assign;
  double best_wcss = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, params.n_restarts);
  for (int r = 0; r < restarts; ++r) {
  Eigen::MatrixXd centers = kmeanspp_init(points, k, rng);
  std::vector<int> assign(m, 0);

  for (int iter = 0; iter < params.max_iter; ++iter) {
    for (int i = 0; i < m; ++i) assign[i] = nearest_center(centers, points.row(i));

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
    for (int i = 0; i < m; ++i) {
      sums.row(assign[i]) += points.row(i);
      ++counts[assign[i]];
    }
    // reseed empty clusters to the point farthest from its current center
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int far_i = 0;
      double far_d = -1.0;
      for (int i = 0; i < m; ++i) {
        if (counts[assign[i]] <= 1) continue;  // never drain a singleton
        double d = (points.row(i) - centers.row(assign[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      sums.row(assign[far_i]) -= points.row(far_i);
      --counts[assign[far_i]];
      assign[far_i] = c;
      sums.row(c) = points.row(far_i);
      counts[c] = 1;
    }

    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      Eigen::RowVectorXd nc = sums.row(c) / counts[c];
      shift = std::max(shift, (nc - centers.row(c)).norm());
      centers.row(c) = nc;
    }
    if (shift < params.tol) break;
  }
  for (int i = 0; i < m; ++i) assign[i] = nearest_center(centers, points.row(i));

  // final pass can re-empty a cluster; pull the farthest point back in
  std::vector<int> counts(k, 0);
  for (int a : assign) ++counts[a];
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    int far_i = -1;
    double far_d = -1.0;
    for (int i = 0; i < m; ++i) {
      if (counts[assign[i]] <= 1) continue;
      double d = (points.row(i) - centers.row(assign[i])).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far_i = i;
      }
    }
    --counts[assign[far_i]];
    assign[far_i] = c;
    counts[c] = 1;
  }

  double w = kmeans_wcss(points, assign, k);
  if (w < best_wcss) {
    best_wcss = w;
    best_assign = std::move(assign);
  }
  }
  return best_assign;
}

double kmeans_wcss(const Eigen::MatrixXd& points, const std::vector<int>& assign,
                   int n_clusters) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n_clusters, points.cols());
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_clusters);
  for (int i = 0; i < points.rows(); ++i) {
    sums.row(assign[i]) += points.row(i);
    ++counts[assign[i]];
  }
  double w = 0.0;
  for (int i = 0; i < points.rows(); ++i) {
    Eigen::RowVectorXd c = sums.row(assign[i]) / std::max(1, counts[assign[i]]);
    w += (points.row(i) - c).squaredNorm();
  }
  return w;
}

Segmentation pre_segment(const TriMesh& mesh, const SpectralBasis& basis,
                         int n_parts, int k_embed, std::uint64_t seed) {
  Embedding emb = spectral_embedding(basis, k_embed);
  KMeansParams params;
  params.n_clusters = n_parts;
  params.seed = seed;
  Segmentation seg;
  seg.part_of = kmeans(emb.coords, params);
  seg.n_parts = n_parts;
  seg.shape = mesh.name;
  return seg;
}

Segmentation split_disconnected_parts(const TriMesh& mesh, const Segmentation& seg) {
  const int n = mesh.n_vertices();
  std::vector<std::vector<int>> adj(n);
  for (const auto& t : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      adj[t[e]].push_back(t[(e + 1) % 3]);
      adj[t[(e + 1) % 3]].push_back(t[e]);
    }
  Segmentation out;
  out.shape = seg.shape;
  out.part_of.assign(n, -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (out.part_of[s] != -1) continue;
    int part = seg.part_of[s];
    stack.push_back(s);
    out.part_of[s] = next;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : adj[v])
        if (out.part_of[u] == -1 && seg.part_of[u] == part) {
          out.part_of[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  out.n_parts = next;
  return out;
}

std::string segmentation_to_json(const Segmentation& seg) {
  nlohmann::json j;
  j["shape"] = seg.shape;
  j["n_parts"] = seg.n_parts;
  j["part_of"] = seg.part_of;
  return j.dump(2) + "\n";
}

Segmentation segmentation_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Segmentation seg;
  seg.shape = j.at("shape").get<std::string>();
  seg.n_parts = j.at("n_parts").get<int>();
  seg.part_of = j.at("part_of").get<std::vector<int>>();
  return seg;
}

}  // namespace coseg
