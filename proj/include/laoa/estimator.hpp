#pragma once

#include <vector>

#include "laoa/array_model.hpp"
#include "laoa/linalg.hpp"
#include "laoa/rooting.hpp"
#include "laoa/synthesis.hpp"

namespace laoa {

/// Electrical angles estimated from one subarray, ascending.
struct ElectricalEstimate {
  std::vector<double> angles;
  std::vector<double> root_magnitudes;
  RootSet roots;
  bool rank_deficient = false;
};

/// Runs the linear-prediction polynomial pipeline on one subarray.
/// Throws Error(QTooLarge) unless 1 <= q <= m-2.
ElectricalEstimate estimate_electrical(const SnapshotMatrix& snap, int q, SolveMode mode);

struct SourceEstimate {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double psi_hat = 0.0;
  double xi_hat = 0.0;
  double root_magnitude_z = 1.0;
  double root_magnitude_x = 1.0;
};

struct AoaEstimate {
  std::vector<SourceEstimate> sources;
  /// Frobenius residual of [Z; X] ~ [A_z; A_x] S for the chosen pairing.
  double pairing_residual = 0.0;
  /// Best residual among the other pairings; infinity when q == 1.
  double runner_up_residual = 0.0;
  bool pairing_ambiguous = false;
  bool rank_deficient = false;
  SolveMode mode = SolveMode::TruncatedSvd;
};

inline constexpr int kPermutationBudget = 5040;

/// Stacked least-squares residual of a given psi/xi association.
double pairing_residual(std::span<const double> psi, std::span<const double> xi,
                        const SnapshotMatrix& z, const SnapshotMatrix& x);

/// Associates each psi estimate with one xi estimate by minimising the
/// stacked residual over all permutations, then inverts each pair to a
/// physical direction. Sources come back in ascending psi order.
AoaEstimate pair_and_recover(const ElectricalEstimate& z_est, const ElectricalEstimate& x_est,
                             const SnapshotMatrix& z, const SnapshotMatrix& x,
                             const ArrayConfig& cfg, const InversionOptions& opts = {});

AoaEstimate estimate_2d_aoa(const SnapshotMatrix& z, const SnapshotMatrix& x, int q,
                            const ArrayConfig& cfg, SolveMode mode,
                            const InversionOptions& opts = {});

}  // namespace laoa
