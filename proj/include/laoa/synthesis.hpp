#pragma once

#include <random>
#include <vector>

#include "laoa/array_model.hpp"
#include "laoa/types.hpp"

namespace laoa {

using Rng = std::mt19937_64;

enum class SignalModel { UnitPowerRandomPhase, Qpsk };

/// Minimum circular distance (radians) between any two sources' psi and
/// between any two sources' xi.
inline constexpr double kDefaultMinSeparation = 0.1;

struct SourceSet {
  std::vector<DirectionPair> directions;
  SignalModel signal_model = SignalModel::UnitPowerRandomPhase;
  double power = 1.0;

  int count() const noexcept { return static_cast<int>(directions.size()); }
};

/// Throws Error(InvalidArgument) for an empty set or negative power and
/// Error(InsufficientSeparation) when two sources' electrical angles are
/// closer than min_sep on either subarray.
void validate_sources(const SourceSet& src, const ArrayConfig& cfg,
                      double min_sep = kDefaultMinSeparation);

enum class Subarray { Z, X };

/// Sensor outputs of one subarray: rows are sensors, columns snapshots.
struct SnapshotMatrix {
  CMatrix data;
  Subarray subarray = Subarray::Z;

  int sensors() const noexcept { return static_cast<int>(data.rows()); }
  int snapshots() const noexcept { return static_cast<int>(data.cols()); }

  /// Throws Error(InvalidArgument) unless rows >= 2, cols >= 1 and all
  /// entries are finite.
  void validate() const;
};

/// Linear-prediction system P c = P1 assembled from one subarray.
struct LpSystem {
  CMatrix P;   // snapshots x (m-1); row k = sensors 2..m at snapshot k
  CVector P1;  // length snapshots; entry k = -(sensor 1 at snapshot k)
};

/// q x snapshots source matrix. Throws Error(InsufficientSnapshots) if
/// snapshots < q.
CMatrix generate_sources(const SourceSet& src, int snapshots, Rng& rng);

/// m x snapshots circular complex white Gaussian noise with E[n n^H] =
/// sigma2 * I and E[n n^T] = 0.
CMatrix generate_noise(int m, int snapshots, double sigma2, Rng& rng);

struct Synthesis {
  SnapshotMatrix z;
  SnapshotMatrix x;
  CMatrix sources;
};

/// Z = A_z S + N_z and X = A_x S + N_x with one common S. Draw order from
/// rng: S, then N_z, then N_x.
Synthesis synthesize(const SourceSet& src, const ArrayConfig& cfg, int snapshots, double sigma2,
                     Rng& rng, double min_sep = kDefaultMinSeparation);

/// Throws Error(TooFewSnapshots) if snapshots < m - 1.
LpSystem build_lp_system(const SnapshotMatrix& snap);

}  // namespace laoa
