#pragma once

#include <Eigen/Core>
#include <optional>

#include "coseg/spectral.hpp"

namespace coseg {

struct HksConfig {
  int n_times = 100;
  int k_eigs = 300;  // capped at basis size; t_min uses the largest available
  // Explicit interval overrides, mostly for tests; the default rules are
  // t_min = 4 ln 10 / lambda_{k_eigs}, t_max = 4 ln 10 / lambda_2.
  std::optional<double> t_min_override;
  std::optional<double> t_max_override;
  // Divide each time slice by its D-weighted mean. Off here, on in the
  // co-segmentation pipeline for cross-shape comparability.
  bool scale_normalize = false;
};

struct HksField {
  Eigen::MatrixXd values;  // n_vertices x n_times, all positive
  Eigen::VectorXd times;   // ascending
  int k_eigs_used = 0;
  bool normalized = false;
};

// Log-uniform time grid on [t_min, t_max]. Throws DisconnectedMesh when
// lambda_2 is numerically zero.
Eigen::VectorXd hks_times(const SpectralBasis& basis, const HksConfig& config);

// values(x, j) = sum_{i<=k_eigs} exp(-lambda_i t_j) phi_i(x)^2.
HksField compute_hks(const SpectralBasis& basis, const HksConfig& config);

}  // namespace coseg
