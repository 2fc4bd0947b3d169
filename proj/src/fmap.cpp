#include "coseg/fmap.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <nlohmann/json.hpp>

namespace coseg {

ConstraintSet build_hks_constraints(const SpectralBasis& source_basis,
                                    const HksField& source_hks,
                                    const SpectralBasis& target_basis,
                                    const HksField& target_hks) {
  if (source_hks.times.size() != target_hks.times.size())
    throw ConfigMismatch("HKS fields sampled with different n_times");
  if (source_hks.normalized != target_hks.normalized)
    throw ConfigMismatch("HKS fields disagree on scale normalization");

  const int m = static_cast<int>(source_hks.times.size());
  ConstraintSet cs;
  cs.source_basis_id = source_basis.basis_id;
  cs.target_basis_id = target_basis.basis_id;
  cs.descriptor_kind = "hks";
  cs.source_coeffs.resize(source_basis.k(), m);
  cs.target_coeffs.resize(target_basis.k(), m);

  auto project_slices = [m](const SpectralBasis& basis, const HksField& hks,
                            Eigen::MatrixXd& out) {
    const double total_mass = basis.mass.sum();
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd slice = hks.values.col(j);
      double mean = basis.mass.dot(slice) / total_mass;
      slice /= mean;  // D-weighted mean normalization per slice
      out.col(j) = basis.eigenvectors.transpose() * basis.mass.cwiseProduct(slice);
    }
  };
  project_slices(source_basis, source_hks, cs.source_coeffs);
  project_slices(target_basis, target_hks, cs.target_coeffs);
  return cs;
}

double default_ridge(const ConstraintSet& constraints) {
  const double m = static_cast<double>(constraints.source_coeffs.cols());
  return 1e-6 * constraints.source_coeffs.squaredNorm() / m;
}

FunctionalMap estimate_map(const ConstraintSet& constraints, double ridge) {
  const Eigen::MatrixXd& S = constraints.source_coeffs;
  const Eigen::MatrixXd& T = constraints.target_coeffs;
  if (S.cols() < 1) throw ValidationError("constraint set is empty");
  if (S.cols() != T.cols())
    throw ConfigMismatch("source/target constraint counts differ");
  if (ridge < 0.0) ridge = default_ridge(constraints);

  const int k = static_cast<int>(S.rows());
  Eigen::MatrixXd gram = S * S.transpose();
  gram.diagonal().array() += ridge;

  // rank of S from a pivoted QR, recorded for diagnostics
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());

  if (ridge == 0.0 && rank < k)
    throw SingularSystem("S S^T is rank-deficient (rank " + std::to_string(rank) +
                         " of " + std::to_string(k) +
                         "); pass ridge > 0 to regularize");

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw SingularSystem("normal-equation factorization failed");

  FunctionalMap map;
  // C = T S^T (S S^T + ridge I)^{-1}, computed as a transposed solve
  map.C = ldlt.solve(S * T.transpose()).transpose();
  map.source_basis_id = constraints.source_basis_id;
  map.target_basis_id = constraints.target_basis_id;
  map.ridge = ridge;
  map.constraint_rank = rank;
  double denom = T.norm();
  map.fit_residual = denom > 0.0 ? (map.C * S - T).norm() / denom : 0.0;
  return map;
}

FunctionCoefficients push_function(const FunctionalMap& map,
                                   const FunctionCoefficients& a) {
  if (a.basis_id != map.source_basis_id)
    throw BasisMismatch("coefficients in basis '" + a.basis_id +
                        "', map expects '" + map.source_basis_id + "'");
  if (a.coeffs.size() != map.C.cols())
    throw LengthMismatch("coefficient length != map source dimension");
  FunctionCoefficients b;
  b.coeffs = map.C * a.coeffs;
  b.basis_id = map.target_basis_id;
  return b;
}

double sparsity_fraction(const FunctionalMap& map, double threshold) {
  const auto& C = map.C;
  if (C.size() == 0) return 1.0;
  std::int64_t below = (C.array().abs() < threshold).count();
  return static_cast<double>(below) / static_cast<double>(C.size());
}

std::string fmap_to_json(const FunctionalMap& map) {
  nlohmann::json j;
  j["source"] = map.source_basis_id;
  j["target"] = map.target_basis_id;
  j["k_source"] = map.C.cols();
  j["k_target"] = map.C.rows();
  j["ridge"] = map.ridge;
  j["residual"] = map.fit_residual;
  j["rank"] = map.constraint_rank;
  std::vector<double> rows;
  rows.reserve(map.C.size());
  for (int r = 0; r < map.C.rows(); ++r)
    for (int c = 0; c < map.C.cols(); ++c) rows.push_back(map.C(r, c));
  j["C"] = rows;
  return j.dump(2) + "\n";
}

FunctionalMap fmap_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FunctionalMap map;
  map.source_basis_id = j.at("source").get<std::string>();
  map.target_basis_id = j.at("target").get<std::string>();
  const int kc = j.at("k_source").get<int>();
  const int kr = j.at("k_target").get<int>();
  map.ridge = j.at("ridge").get<double>();
  map.fit_residual = j.at("residual").get<double>();
  map.constraint_rank = j.value("rank", 0);
  auto flat = j.at("C").get<std::vector<double>>();
  if (static_cast<int>(flat.size()) != kr * kc)
    throw ValidationError("C entry count does not match k_target x k_source");
  map.C.resize(kr, kc);
  for (int r = 0; r < kr; ++r)
    for (int c = 0; c < kc; ++c) map.C(r, c) = flat[r * kc + c];
  return map;
}

}  // namespace coseg
