#pragma once

#include <Eigen/Core>
#include <string>

#include "coseg/laplace.hpp"

namespace coseg {

/// First k eigenpairs of A phi = lambda D phi, ascending, D-orthonormal,
/// sign-fixed (largest-|entry| positive in each column).
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;   // lambda_1 <= ... <= lambda_k
  Eigen::MatrixXd eigenvectors;  // n x k, columns phi_i
  Eigen::VectorXd mass;          // the D used (diagonal)
  Eigen::VectorXd residuals;     // ||A phi - lambda D phi|| / ||D phi|| per pair
  std::string basis_id;          // identifies mesh + parameters

  int k() const { return static_cast<int>(eigenvalues.size()); }
  int n() const { return static_cast<int>(eigenvectors.rows()); }

  // View of the first k_sub pairs (shares the basis_id with a suffix).
  SpectralBasis truncated(int k_sub) const;
};

struct FunctionCoefficients {
  Eigen::VectorXd coeffs;
  std::string basis_id;
};

enum class EigenSolverKind {
  Auto,       // iterative unless k is a large fraction of n
  Iterative,  // shift-invert Lanczos, full reorthogonalization
  Dense       // full dense generalized decomposition, truncated to k
};

// Smallest-k eigenpairs of (A, D). Residual tolerance 1e-8 enforced; throws
// ConvergenceFailure when the Lanczos run cannot reach it, KTooLarge when
// k >= n.
SpectralBasis compute_basis(const LaplaceSystem& system, int k,
                            EigenSolverKind solver = EigenSolverKind::Auto,
                            const std::string& basis_id = "");

// a = Phi^T D f (coefficients in the D inner product).
FunctionCoefficients project(const SpectralBasis& basis, const Eigen::VectorXd& f);

// f = Phi a. Throws BasisMismatch when the coefficient basis_id differs.
Eigen::VectorXd reconstruct(const SpectralBasis& basis,
                            const FunctionCoefficients& a);

// Binary eigensolve cache. Files are validated by mesh hash, h_factor and k;
// load returns false on miss or stale entry.
void save_basis_cache(const SpectralBasis& basis, std::uint64_t mesh_hash,
                      double h_factor, const std::string& path);
bool load_basis_cache(const std::string& path, std::uint64_t mesh_hash,
                      double h_factor, int k, SpectralBasis& out);

}  // namespace coseg
