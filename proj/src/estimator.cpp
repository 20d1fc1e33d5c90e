#include "laoa/estimator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "laoa/error.hpp"

namespace laoa {

ElectricalEstimate estimate_electrical(const SnapshotMatrix& snap, int q, SolveMode mode) {
  snap.validate();
  const int m = snap.sensors();
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "source count must be positive");
  if (q > m - 2) {
    throw Error(ErrorCode::QTooLarge, std::to_string(q) + " sources need at least " +
                                          std::to_string(q + 2) + " elements per subarray, have " +
                                          std::to_string(m));
  }
  const LpSystem sys = build_lp_system(snap);
  const CoefficientVector coeffs = solve_coeffs(sys, q, mode);

  ElectricalEstimate est;
  est.rank_deficient = coeffs.rank_deficient;
  est.roots = solve_polynomial({coeffs.c.data(), static_cast<std::size_t>(coeffs.c.size())}, q);
  if (mode == SolveMode::PlainLeastSquares) {
    for (double r : est.roots.residuals) {
      if (r > kRootResidualTol) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "root residual " + std::to_string(r) + " rejected on the noiseless path");
      }
    }
  }
  est.angles = electrical_angles_from_roots(est.roots.roots, est.roots.selected);
  for (auto i : est.roots.selected) est.root_magnitudes.push_back(std::abs(est.roots.roots[i]));
  return est;
}

double pairing_residual(std::span<const double> psi, std::span<const double> xi,
                        const SnapshotMatrix& z, const SnapshotMatrix& x) {
  const Eigen::Index m = z.data.rows();
  const Eigen::Index snapshots = z.data.cols();
  if (x.data.rows() != m || x.data.cols() != snapshots) {
    throw Error(ErrorCode::DimensionMismatch, "Z and X snapshot matrices differ in shape");
  }
  if (psi.size() != xi.size() || psi.empty()) {
    throw Error(ErrorCode::InvalidArgument, "psi and xi sets must be non-empty and equal in size");
  }
  CMatrix stacked(2 * m, snapshots);
  stacked << z.data, x.data;
  CMatrix steering(2 * m, static_cast<Eigen::Index>(psi.size()));
  steering << steering_matrix(psi, static_cast<int>(m)), steering_matrix(xi, static_cast<int>(m));
  const CMatrix common = truncated_pseudoinverse(steering, static_cast<int>(psi.size())) * stacked;
  return (stacked - steering * common).norm();
}

AoaEstimate pair_and_recover(const ElectricalEstimate& z_est, const ElectricalEstimate& x_est,
                             const SnapshotMatrix& z, const SnapshotMatrix& x,
                             const ArrayConfig& cfg, const InversionOptions& opts) {
  const std::size_t q = z_est.angles.size();
  if (q == 0 || x_est.angles.size() != q) {
    throw Error(ErrorCode::InvalidArgument, "psi and xi estimate counts differ or are zero");
  }
  double permutations = 1.0;
  for (std::size_t k = 2; k <= q; ++k) permutations *= static_cast<double>(k);
  if (permutations > kPermutationBudget) {
    throw Error(ErrorCode::PermutationBudget,
                std::to_string(q) + " sources exceed the exhaustive pairing budget");
  }

  std::vector<std::size_t> perm(q);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best_perm = perm;
  double best = std::numeric_limits<double>::infinity();
  double runner_up = std::numeric_limits<double>::infinity();
  std::vector<double> xi(q);
  do {
    for (std::size_t l = 0; l < q; ++l) xi[l] = x_est.angles[perm[l]];
    const double res = pairing_residual(z_est.angles, xi, z, x);
    if (res < best) {
      runner_up = best;
      best = res;
      best_perm = perm;
    } else if (res < runner_up) {
      runner_up = res;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  AoaEstimate out;
  out.pairing_residual = best;
  out.runner_up_residual = runner_up;
  out.pairing_ambiguous = q > 1 && (runner_up - best) < 1e-6 * runner_up;
  out.rank_deficient = z_est.rank_deficient || x_est.rank_deficient;
  for (std::size_t l = 0; l < q; ++l) {
    const std::size_t j = best_perm[l];
    SourceEstimate s;
    s.psi_hat = z_est.angles[l];
    s.xi_hat = x_est.angles[j];
    if (l < z_est.root_magnitudes.size()) s.root_magnitude_z = z_est.root_magnitudes[l];
    if (j < x_est.root_magnitudes.size()) s.root_magnitude_x = x_est.root_magnitudes[j];
    const DirectionPair d = direction_from_electrical({s.psi_hat, s.xi_hat}, cfg, opts);
    s.theta_deg = d.theta_deg();
    s.phi_deg = d.phi_deg();
    out.sources.push_back(s);
  }
  return out;
}

AoaEstimate estimate_2d_aoa(const SnapshotMatrix& z, const SnapshotMatrix& x, int q,
                            const ArrayConfig& cfg, SolveMode mode, const InversionOptions& opts) {
  if (z.sensors() != cfg.elements() || x.sensors() != cfg.elements()) {
    throw Error(ErrorCode::DimensionMismatch,
                "snapshot matrices must have " + std::to_string(cfg.elements()) + " rows");
  }
  const ElectricalEstimate ze = estimate_electrical(z, q, mode);
  const ElectricalEstimate xe = estimate_electrical(x, q, mode);
  AoaEstimate out = pair_and_recover(ze, xe, z, x, cfg, opts);
  out.mode = mode;
  return out;
}

}  // namespace laoa
