#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>

#include "coseg/mesh.hpp"

namespace coseg {

/// Gaussian-kernel mesh Laplacian as a generalized symmetric pair
/// A f = lambda D f. A = Q - S with S_ij = m_i m_j K_ij, Q = diag(row sums),
/// D = diag(lumped masses), so D^{-1} A reproduces the pointwise kernel sum
/// while A stays symmetric positive semidefinite.
struct LaplaceSystem {
  Eigen::SparseMatrix<double> stiffness;  // A, symmetric, zero row sums
  Eigen::VectorXd mass;                   // diagonal of D, all positive
  double bandwidth = 0.0;                 // h, units length^2
  double truncation_epsilon = 0.0;        // kernel cutoff used at build
  std::int64_t kernel_nnz = 0;            // stored off-diagonal pair count * 2 + diag

  int size() const { return static_cast<int>(mass.size()); }
};

// Builds the truncated-kernel system. h = h_factor * (mean edge length)^2;
// kernel entries with squared distance beyond 4h*ln(1/truncation_epsilon)
// are dropped via a uniform spatial grid. truncation_epsilon <= 0 disables
// truncation (dense kernel). Throws EmptyKernelRow when a vertex keeps no
// neighbor within the cutoff.
LaplaceSystem build_laplace(const TriMesh& mesh, double h_factor = 2.0,
                            double truncation_epsilon = 1e-9);

// Untruncated double sum over faces straight from the kernel definition:
// g(w) = 1/(4 pi h^2) * sum_X Area(X)/#X * sum_{p in V(X)} K(p,w)(f(p)-f(w)).
// O(n^2); testing oracle for build_laplace (equals -D^{-1} A f).
Eigen::VectorXd apply_laplace_direct(const TriMesh& mesh, double h,
                                     const Eigen::VectorXd& f);

// Debug dump of A (coordinate .mtx) and D (diagonal .mtx) for external tools.
void dump_matrix_market(const LaplaceSystem& sys, const std::string& stiffness_path,
                        const std::string& mass_path);

}  // namespace coseg
