#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "coseg/config.hpp"
#include "coseg/fmap.hpp"
#include "coseg/mesh.hpp"
#include "coseg/preseg.hpp"
#include "coseg/spectral.hpp"

namespace coseg {

/// Normalized image of one part's indicator function in the reference basis.
struct PartSignature {
  int shape_index = 0;
  int part_id = 0;
  Eigen::VectorXd sig;     // unit Euclidean norm
  double part_area = 0.0;  // summed lumped mass of the part's vertices
};

struct Labeling {
  std::vector<int> label_of;  // per-vertex label in [0, L)
  int L = 0;
  std::string shape;
};

struct MapDiagnostics {
  int shape_index = 0;
  double fit_residual = 0.0;
  double sparsity = 0.0;  // fraction of |c_ij| < 0.1
  int constraint_rank = 0;
};

struct CosegResult {
  std::vector<Labeling> labelings;
  std::map<std::pair<int, int>, int> part_to_label;  // (shape, part) -> label
  int reference_shape = 0;
  std::vector<MapDiagnostics> diagnostics;
  std::vector<FunctionalMap> maps;  // per shape; empty C for the reference
  std::vector<Segmentation> segmentations;
};

// Index of the shape with median vertex count; ties break to the lowest index.
int choose_reference(const std::vector<int>& vertex_counts);

// D-normalized indicator of a segmentation part: 1 on the part, 0 elsewhere,
// scaled so f^T D f = 1. Throws EmptyPart.
Eigen::VectorXd part_indicator(const Segmentation& seg, int part_id,
                               const Eigen::VectorXd& masses);

// Per-shape inputs for signature building. The reference shape uses an
// identity map (maps[ref] ignored).
struct ShapeBundle {
  const TriMesh* mesh = nullptr;
  const SpectralBasis* basis = nullptr;  // truncated to k_basis
  const Segmentation* seg = nullptr;
  const FunctionalMap* map_to_ref = nullptr;  // null for the reference shape
};

std::vector<PartSignature> build_signatures(const std::vector<ShapeBundle>& shapes,
                                            int reference);

// Seeded k-means over unit-norm signature vectors; (shape, part) -> label.
std::map<std::pair<int, int>, int> cluster_parts(
    const std::vector<PartSignature>& signatures, int L, std::uint64_t seed);

// Full pipeline of pre-segmentation, star-topology map estimation, signature
// clustering and labeling. Writes nothing; see cli for serialization.
CosegResult run_coseg(const RunConfig& config);
CosegResult run_coseg(const RunConfig& config, const std::vector<TriMesh>& meshes);

// Area-weighted accuracy under the best one-to-one label matching (Hungarian
// assignment on the label-confusion mass matrix).
double label_accuracy(const std::vector<int>& predicted,
                      const std::vector<int>& truth,
                      const Eigen::VectorXd& masses);

// One integer per vertex, or one per face (majority vote to vertices, ties to
// the smallest label id). Throws CountMismatch when neither count fits.
std::vector<int> load_ground_truth(const std::string& path, const TriMesh& mesh);

std::string labeling_to_json(const Labeling& labeling);
Labeling labeling_from_json(const std::string& text);

}  // namespace coseg
