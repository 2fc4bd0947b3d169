#include "coseg/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

namespace coseg {

namespace {

constexpr double kResidualTol = 1e-8;

void fix_signs(Eigen::MatrixXd& phi) {
  for (int c = 0; c < phi.cols(); ++c) {
    int imax = 0;
    phi.col(c).cwiseAbs().maxCoeff(&imax);
    if (phi(imax, c) < 0.0) phi.col(c) = -phi.col(c);
  }
}

Eigen::VectorXd pair_residuals(const LaplaceSystem& sys, const Eigen::VectorXd& lam,
                               const Eigen::MatrixXd& phi) {
  Eigen::VectorXd res(lam.size());
  for (int i = 0; i < lam.size(); ++i) {
    Eigen::VectorXd dphi = sys.mass.cwiseProduct(phi.col(i));
    res[i] = (sys.stiffness * phi.col(i) - lam[i] * dphi).norm() / dphi.norm();
  }
  return res;
}

// Full dense generalized decomposition; the fallback for small problems and
// large k/n ratios.
void solve_dense(const LaplaceSystem& sys, int k, Eigen::VectorXd& lam,
                 Eigen::MatrixXd& phi) {
  Eigen::MatrixXd A = Eigen::MatrixXd(sys.stiffness);
  Eigen::MatrixXd D = sys.mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, D);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("dense generalized eigensolve failed");
  lam = es.eigenvalues().head(k);
  phi = es.eigenvectors().leftCols(k);
}

// Shift-invert Lanczos in the D inner product with full reorthogonalization.
// Operator: y -> (A + sigma D)^{-1} D y, self-adjoint w.r.t. <u,v> = u^T D v;
// its largest Ritz values 1/(lambda + sigma) give the smallest lambda.
void solve_lanczos(const LaplaceSystem& sys, int k, Eigen::VectorXd& lam,
                   Eigen::MatrixXd& phi) {
  const int n = sys.size();
  const Eigen::VectorXd& d = sys.mass;
  const double sigma =
      std::max(1e-12, 0.01 * sys.stiffness.diagonal().sum() / d.sum());

  Eigen::SparseMatrix<double> shifted = sys.stiffness;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += sigma * d[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw ConvergenceFailure("factorization of shifted stiffness failed");

  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  auto random_vec = [&] {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };
  auto d_dot = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.dot(d.cwiseProduct(v));
  };

  int m = std::min(n, std::max(2 * k + 30, 40));
  Eigen::VectorXd prev_lam;
  while (true) {
    Eigen::MatrixXd V(n, m);
    Eigen::VectorXd alpha(m), beta(m);
    beta.setZero();

    Eigen::VectorXd v = random_vec();
    v /= std::sqrt(d_dot(v, v));
    V.col(0) = v;
    int built = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = ldlt.solve(d.cwiseProduct(V.col(j)));
      alpha[j] = d_dot(w, V.col(j));
      w -= alpha[j] * V.col(j);
      if (j > 0) w -= beta[j - 1] * V.col(j - 1);
      // two passes of full reorthogonalization in the D inner product
      for (int pass = 0; pass < 2; ++pass)
        w -= V.leftCols(j + 1) *
             (V.leftCols(j + 1).transpose() * d.cwiseProduct(w));
      double b = std::sqrt(std::max(0.0, d_dot(w, w)));
      if (j + 1 == m) break;
      if (b < 1e-13) {
        // invariant subspace hit; restart the recurrence with a fresh vector
        Eigen::VectorXd r = random_vec();
        for (int pass = 0; pass < 2; ++pass)
          r -= V.leftCols(j + 1) *
               (V.leftCols(j + 1).transpose() * d.cwiseProduct(r));
        double rn = std::sqrt(d_dot(r, r));
        if (rn < 1e-13) {
          built = j + 1;
          break;
        }
        beta[j] = 0.0;
        V.col(j + 1) = r / rn;
      } else {
        beta[j] = b;
        V.col(j + 1) = w / b;
      }
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < built) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    // largest theta first -> smallest lambda first
    Eigen::VectorXd theta = es.eigenvalues();
    Eigen::MatrixXd Y = es.eigenvectors();

    if (built >= k) {
      lam.resize(k);
      phi.resize(n, k);
      for (int i = 0; i < k; ++i) {
        int src = built - 1 - i;
        lam[i] = 1.0 / theta[src] - sigma;
        phi.col(i) = V.leftCols(built) * Y.col(src);
        phi.col(i) /= std::sqrt(d_dot(phi.col(i), phi.col(i)));
      }
      // Rayleigh-Ritz refinement on the extracted subspace sharpens the
      // eigenvalues well past the Lanczos stopping residual.
      Eigen::MatrixXd B = phi.transpose() * (sys.stiffness * phi);
      Eigen::MatrixXd M = phi.transpose() * d.asDiagonal() * phi;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(B, M);
      if (rr.info() == Eigen::Success) {
        lam = rr.eigenvalues();
        phi = phi * rr.eigenvectors();
      }
      Eigen::VectorXd res = pair_residuals(sys, lam, phi);
      // Tight per-pair residuals alone cannot detect eigenvalues skipped
      // inside near-degenerate clusters, so additionally require the values
      // to be stable under subspace growth (m = n is exact and accepted).
      bool stable = m >= n;
      if (!stable && prev_lam.size() == lam.size()) {
        stable = true;
        for (int i = 0; i < k && stable; ++i)
          if (std::abs(lam[i] - prev_lam[i]) >
              1e-9 * std::max(lam[i], 1e-6 * lam[k - 1]))
            stable = false;
      }
      if (res.maxCoeff() <= kResidualTol && stable) return;
      prev_lam = lam;
    }
    if (m >= n) {
      double worst = lam.size() >= k
                         ? pair_residuals(sys, lam, phi).maxCoeff()
                         : std::numeric_limits<double>::infinity();
      throw ConvergenceFailure(
          "Lanczos stagnated at full subspace; worst residual " +
          std::to_string(worst));
    }
    m = std::min(n, m + std::max(m / 2, 20));
  }
}

}  // namespace

SpectralBasis SpectralBasis::truncated(int k_sub) const {
  if (k_sub > k()) throw KTooLarge("truncation beyond basis size");
  if (k_sub == k()) return *this;
  SpectralBasis sub;
  sub.eigenvalues = eigenvalues.head(k_sub);
  sub.eigenvectors = eigenvectors.leftCols(k_sub);
  sub.mass = mass;
  sub.residuals = residuals.head(k_sub);
  sub.basis_id = basis_id + "|k=" + std::to_string(k_sub);
  return sub;
}

SpectralBasis compute_basis(const LaplaceSystem& system, int k,
                            EigenSolverKind solver, const std::string& basis_id) {
  const int n = system.size();
  if (k < 1) throw KTooLarge("k must be positive");
  if (k >= n) throw KTooLarge("k = " + std::to_string(k) +
                              " must be < n = " + std::to_string(n));

  if (solver == EigenSolverKind::Auto)
    solver = (n <= 120 || k > n / 3) ? EigenSolverKind::Dense
                                     : EigenSolverKind::Iterative;

  Eigen::VectorXd lam;
  Eigen::MatrixXd phi;
  if (solver == EigenSolverKind::Dense)
    solve_dense(system, k, lam, phi);
  else
    solve_lanczos(system, k, lam, phi);

  // ascending order (solvers already sort, but make it a guarantee)
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lam[a] < lam[b]; });
  Eigen::VectorXd lam_s(k);
  Eigen::MatrixXd phi_s(n, k);
  for (int i = 0; i < k; ++i) {
    lam_s[i] = std::max(0.0, lam[order[i]]);  // clamp -eps round-off at zero
    phi_s.col(i) = phi.col(order[i]);
  }
  fix_signs(phi_s);

  SpectralBasis basis;
  basis.eigenvalues = lam_s;
  basis.eigenvectors = phi_s;
  basis.mass = system.mass;
  basis.residuals = pair_residuals(system, lam_s, phi_s);
  basis.basis_id = basis_id.empty()
                       ? "basis:n=" + std::to_string(n) + ":k=" + std::to_string(k)
                       : basis_id;
  if (basis.residuals.maxCoeff() > kResidualTol)
    throw ConvergenceFailure("eigenpair residual " +
                             std::to_string(basis.residuals.maxCoeff()) +
                             " exceeds 1e-8");
  return basis;
}

FunctionCoefficients project(const SpectralBasis& basis, const Eigen::VectorXd& f) {
  if (f.size() != basis.n())
    throw LengthMismatch("function length != basis vertex count");
  FunctionCoefficients fc;
  fc.coeffs = basis.eigenvectors.transpose() * basis.mass.cwiseProduct(f);
  fc.basis_id = basis.basis_id;
  return fc;
}

Eigen::VectorXd reconstruct(const SpectralBasis& basis,
                            const FunctionCoefficients& a) {
  if (a.basis_id != basis.basis_id)
    throw BasisMismatch("coefficients from basis '" + a.basis_id +
                        "' applied to basis '" + basis.basis_id + "'");
  if (a.coeffs.size() != basis.k()) throw LengthMismatch("coefficient length != k");
  return basis.eigenvectors * a.coeffs;
}

namespace {
constexpr std::uint32_t kCacheMagic = 0x43534732;  // "CSG2"
constexpr std::uint32_t kCacheVersion = 1;
}  // namespace

void save_basis_cache(const SpectralBasis& basis, std::uint64_t mesh_hash,
                      double h_factor, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  auto put = [&](const void* p, size_t nbytes) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(nbytes));
  };
  std::uint32_t n32 = static_cast<std::uint32_t>(basis.n());
  std::uint32_t k32 = static_cast<std::uint32_t>(basis.k());
  std::uint32_t idlen = static_cast<std::uint32_t>(basis.basis_id.size());
  put(&kCacheMagic, 4);
  put(&kCacheVersion, 4);
  put(&mesh_hash, 8);
  put(&h_factor, 8);
  put(&n32, 4);
  put(&k32, 4);
  put(&idlen, 4);
  put(basis.basis_id.data(), idlen);
  put(basis.eigenvalues.data(), sizeof(double) * basis.k());
  put(basis.eigenvectors.data(), sizeof(double) * basis.n() * basis.k());
  put(basis.mass.data(), sizeof(double) * basis.n());
  put(basis.residuals.data(), sizeof(double) * basis.k());
  if (!out) throw IoError("write failed: " + path);
}

bool load_basis_cache(const std::string& path, std::uint64_t mesh_hash,
                      double h_factor, int k, SpectralBasis& out_basis) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  auto get = [&](void* p, size_t nbytes) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(nbytes));
    return static_cast<bool>(in);
  };
  std::uint32_t magic = 0, version = 0, n32 = 0, k32 = 0, idlen = 0;
  std::uint64_t hash = 0;
  double hf = 0.0;
  if (!get(&magic, 4) || magic != kCacheMagic) return false;
  if (!get(&version, 4) || version != kCacheVersion) return false;
  if (!get(&hash, 8) || hash != mesh_hash) return false;
  if (!get(&hf, 8) || hf != h_factor) return false;
  if (!get(&n32, 4) || !get(&k32, 4) || !get(&idlen, 4)) return false;
  // exact k required so basis ids are identical across cache hits and misses
  if (static_cast<int>(k32) != k) return false;
  SpectralBasis b;
  b.basis_id.resize(idlen);
  if (idlen && !get(b.basis_id.data(), idlen)) return false;
  b.eigenvalues.resize(k32);
  b.eigenvectors.resize(n32, k32);
  b.mass.resize(n32);
  b.residuals.resize(k32);
  if (!get(b.eigenvalues.data(), sizeof(double) * k32)) return false;
  if (!get(b.eigenvectors.data(), sizeof(double) * n32 * k32)) return false;
  if (!get(b.mass.data(), sizeof(double) * n32)) return false;
  if (!get(b.residuals.data(), sizeof(double) * k32)) return false;
  out_basis = std::move(b);
  return true;
}

}  // namespace coseg
