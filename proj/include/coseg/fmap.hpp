#pragma once

#include <Eigen/Core>
#include <string>

#include "coseg/hks.hpp"
#include "coseg/spectral.hpp"

namespace coseg {

/// k_target x k_source matrix C mapping coefficient vectors between two
/// truncated spectral bases, with least-squares fit diagnostics.
struct FunctionalMap {
  Eigen::MatrixXd C;
  std::string source_basis_id;
  std::string target_basis_id;
  double fit_residual = 0.0;  // ||C S - T||_F / ||T||_F over training constraints
  double ridge = 0.0;
  int constraint_rank = 0;  // numerical rank of S
};

/// Index-aligned coefficient columns of corresponding descriptor functions.
struct ConstraintSet {
  Eigen::MatrixXd source_coeffs;  // k_source x m
  Eigen::MatrixXd target_coeffs;  // k_target x m
  std::string source_basis_id;
  std::string target_basis_id;
  std::string descriptor_kind;
};

// One constraint column per HKS time slice; slices mean-normalized in the
// D-weighted sense before projection. Both fields must share n_times.
ConstraintSet build_hks_constraints(const SpectralBasis& source_basis,
                                    const HksField& source_hks,
                                    const SpectralBasis& target_basis,
                                    const HksField& target_hks);

// Default ridge used by estimate_map when the caller passes a negative value:
// 1e-6 * ||S||_F^2 / m.
double default_ridge(const ConstraintSet& constraints);

// C = argmin ||C S - T||_F^2 + ridge ||C||_F^2 via the normal equations.
// Throws SingularSystem when ridge = 0 and S S^T is rank-deficient.
FunctionalMap estimate_map(const ConstraintSet& constraints, double ridge);

// b = C a. Throws BasisMismatch when a is not in the map's source basis.
FunctionCoefficients push_function(const FunctionalMap& map,
                                   const FunctionCoefficients& a);

// Fraction of entries with |c_ij| below the threshold.
double sparsity_fraction(const FunctionalMap& map, double threshold = 0.1);

std::string fmap_to_json(const FunctionalMap& map);
FunctionalMap fmap_from_json(const std::string& text);

}  // namespace coseg
