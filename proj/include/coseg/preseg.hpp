#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "coseg/mesh.hpp"
#include "coseg/spectral.hpp"

namespace coseg {

/// Spectral embedding coordinates: column j = phi_{j+2} / sqrt(lambda_{j+2})
/// (the trivial near-zero pair is skipped).
struct Embedding {
  Eigen::MatrixXd coords;  // n_vertices x k_embed
  int k_embed = 0;
};

struct Segmentation {
  std::vector<int> part_of;  // per-vertex part id in [0, n_parts)
  int n_parts = 0;
  std::string shape;
};

// Throws DisconnectedMesh when lambda_2 is numerically zero.
Embedding spectral_embedding(const SpectralBasis& basis, int k_embed);

struct KMeansParams {
  int n_clusters = 0;
  std::uint64_t seed = 0;
  int max_iter = 200;
  double tol = 1e-9;
  int n_restarts = 8;
};

// Lloyd iterations from a seeded k-means++ initialization. Deterministic:
// ties break to the lowest cluster index, empty clusters reseed to the point
// farthest from its center. Rows of `points` are observations.
std::vector<int> kmeans(const Eigen::MatrixXd& points, const KMeansParams& params);

// Within-cluster sum of squared distances for a given assignment.
double kmeans_wcss(const Eigen::MatrixXd& points, const std::vector<int>& assign,
                   int n_clusters);

Segmentation pre_segment(const TriMesh& mesh, const SpectralBasis& basis,
                         int n_parts, int k_embed, std::uint64_t seed);

// Optional post-pass: split each part into vertex-connected components,
// renumbering parts densely. Off by default in the pipeline.
Segmentation split_disconnected_parts(const TriMesh& mesh, const Segmentation& seg);

std::string segmentation_to_json(const Segmentation& seg);
Segmentation segmentation_from_json(const std::string& text);

}  // namespace coseg
