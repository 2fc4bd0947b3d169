#include "coseg/hks.hpp"

#include <cmath>

namespace coseg {

Eigen::VectorXd hks_times(const SpectralBasis& basis, const HksConfig& config) {
  if (config.n_times < 2) throw ValidationError("n_times must be >= 2");
  if (basis.k() < 2) throw KTooLarge("HKS needs at least 2 eigenpairs");

  const int k_eigs = std::min(config.k_eigs, basis.k());
  const double lam2 = basis.eigenvalues[1];
  const double lam_top = basis.eigenvalues[k_eigs - 1];
  if (lam2 <= 1e-9 * basis.eigenvalues[basis.k() - 1] || lam2 <= 0.0)
    throw DisconnectedMesh("lambda_2 is numerically zero");

  const double four_ln10 = 4.0 * std::log(10.0);
  double t_min = config.t_min_override.value_or(four_ln10 / lam_top);
  double t_max = config.t_max_override.value_or(four_ln10 / lam2);
  if (!(t_min < t_max))
    throw ValidationError("t_min must be below t_max");

  Eigen::VectorXd t(config.n_times);
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int j = 0; j < config.n_times; ++j)
    t[j] = std::exp(l0 + (l1 - l0) * j / (config.n_times - 1));
  t[0] = t_min;
  t[config.n_times - 1] = t_max;
  return t;
}

HksField compute_hks(const SpectralBasis& basis, const HksConfig& config) {
  HksField field;
  field.times = hks_times(basis, config);
  field.k_eigs_used = std::min(config.k_eigs, basis.k());

  const int n = basis.n();
  const int nt = static_cast<int>(field.times.size());
  const Eigen::MatrixXd phi2 =
      basis.eigenvectors.leftCols(field.k_eigs_used).array().square();
  field.values.resize(n, nt);
  for (int j = 0; j < nt; ++j) {
    Eigen::VectorXd decay =
        (-basis.eigenvalues.head(field.k_eigs_used).array() * field.times[j])
            .exp();
    field.values.col(j) = phi2 * decay;
  }

  if (config.scale_normalize) {
    const double total_mass = basis.mass.sum();
    for (int j = 0; j < nt; ++j) {
      double mean = basis.mass.dot(field.values.col(j)) / total_mass;
      field.values.col(j) /= mean;
    }
    field.normalized = true;
  }
  return field;
}

}  // namespace coseg
