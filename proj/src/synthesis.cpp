#include "laoa/synthesis.hpp"

#include <cmath>
#include <string>

#include "laoa/error.hpp"

namespace laoa {

void validate_sources(const SourceSet& src, const ArrayConfig& cfg, double min_sep) {
  if (src.directions.empty()) {
    throw Error(ErrorCode::InvalidArgument, "source set is empty");
  }
  if (!(src.power >= 0.0) || !std::isfinite(src.power)) {
    throw Error(ErrorCode::InvalidArgument, "source power must be finite and non-negative");
  }
  const auto& dirs = src.directions;
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const auto ea = electrical_from_direction(dirs[a], cfg);
    for (std::size_t b = a + 1; b < dirs.size(); ++b) {
      const auto eb = electrical_from_direction(dirs[b], cfg);
      const double dpsi = std::abs(wrap_angle(ea.psi - eb.psi));
      const double dxi = std::abs(wrap_angle(ea.xi - eb.xi));
      if (dpsi < min_sep || dxi < min_sep) {
        throw Error(ErrorCode::InsufficientSeparation,
                    "sources " + std::to_string(a) + " and " + std::to_string(b) +
                        " are closer than " + std::to_string(min_sep) +
                        " rad in psi or xi (dpsi=" + std::to_string(dpsi) +
                        ", dxi=" + std::to_string(dxi) + ")");
      }
    }
  }
}

void SnapshotMatrix::validate() const {
  if (data.rows() < 2 || data.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "snapshot matrix must be at least 2x1, got " +
                                                std::to_string(data.rows()) + "x" +
                                                std::to_string(data.cols()));
  }
  if (!data.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "snapshot matrix has non-finite entries");
  }
}

CMatrix generate_sources(const SourceSet& src, int snapshots, Rng& rng) {
  const int q = src.count();
  if (snapshots < q || snapshots < 1) {
    throw Error(ErrorCode::InsufficientSnapshots,
                std::to_string(snapshots) + " snapshots cannot support " + std::to_string(q) +
                    " sources");
  }
  const double amplitude = std::sqrt(src.power);
  CMatrix s(q, snapshots);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> symbol(0, 3);
  for (int k = 0; k < snapshots; ++k) {
    for (int l = 0; l < q; ++l) {
      switch (src.signal_model) {
        case SignalModel::UnitPowerRandomPhase:
          s(l, k) = std::polar(amplitude, phase(rng));
          break;
        case SignalModel::Qpsk:
          s(l, k) = std::polar(amplitude, kPi / 4.0 + symbol(rng) * (kPi / 2.0));
          break;
      }
    }
  }
  return s;
}

CMatrix generate_noise(int m, int snapshots, double sigma2, Rng& rng) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::InvalidArgument, "noise variance must be finite and non-negative");
  }
  CMatrix n = CMatrix::Zero(m, snapshots);
  if (sigma2 == 0.0) return n;
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  for (int k = 0; k < snapshots; ++k) {
    for (int i = 0; i < m; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      n(i, k) = Complex(re, im);
    }
  }
  return n;
}

Synthesis synthesize(const SourceSet& src, const ArrayConfig& cfg, int snapshots, double sigma2,
                     Rng& rng, double min_sep) {
  validate_sources(src, cfg, min_sep);
  const int m = cfg.elements();
  std::vector<double> psi;
  std::vector<double> xi;
  for (const auto& d : src.directions) {
    psi.push_back(psi_from_direction(d, cfg));
    xi.push_back(xi_from_direction(d, cfg));
  }
  Synthesis out;
  out.sources = generate_sources(src, snapshots, rng);
  const CMatrix nz = generate_noise(m, snapshots, sigma2, rng);
  const CMatrix nx = generate_noise(m, snapshots, sigma2, rng);
  out.z = {steering_matrix(psi, m) * out.sources + nz, Subarray::Z};
  out.x = {steering_matrix(xi, m) * out.sources + nx, Subarray::X};
  return out;
}

LpSystem build_lp_system(const SnapshotMatrix& snap) {
  snap.validate();
  const Eigen::Index m = snap.data.rows();
  const Eigen::Index snapshots = snap.data.cols();
  if (snapshots < m - 1) {
    throw Error(ErrorCode::TooFewSnapshots,
                std::to_string(snapshots) + " snapshots; the prediction system needs at least " +
                    std::to_string(m - 1));
  }
  LpSystem sys;
  sys.P = snap.data.bottomRows(m - 1).transpose();
  sys.P1 = -snap.data.row(0).transpose();
  return sys;
}

}  // namespace laoa
