#include "laoa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "laoa/error.hpp"

namespace laoa {

ArrayConfig::ArrayConfig(int elements, double spacing_ratio)
    : elements_(elements), spacing_ratio_(spacing_ratio) {
  if (elements < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "array needs at least 2 elements per subarray, got " + std::to_string(elements));
  }
  if (!(spacing_ratio > 0.0 && spacing_ratio <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument,
                "spacing ratio must lie in (0, 0.5], got " + std::to_string(spacing_ratio));
  }
}

DirectionPair::DirectionPair(double theta_deg, double phi_deg)
    : theta_deg_(theta_deg), phi_deg_(phi_deg) {
  if (!(theta_deg > 0.0 && theta_deg < 180.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "theta must lie in (0, 180) degrees, got " + std::to_string(theta_deg));
  }
  if (!(phi_deg >= 0.0 && phi_deg <= 180.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "phi must lie in [0, 180] degrees, got " + std::to_string(phi_deg));
  }
}

double psi_from_direction(const DirectionPair& dir, const ArrayConfig& cfg) {
  return cfg.phase_scale() * std::cos(deg_to_rad(dir.theta_deg()));
}

double xi_from_direction(const DirectionPair& dir, const ArrayConfig& cfg) {
  return cfg.phase_scale() * std::sin(deg_to_rad(dir.theta_deg())) *
         std::cos(deg_to_rad(dir.phi_deg()));
}

ElectricalAngles electrical_from_direction(const DirectionPair& dir, const ArrayConfig& cfg) {
  return {psi_from_direction(dir, cfg), xi_from_direction(dir, cfg)};
}

CVector steering_vector(double phase, int m) {
  CVector a(m);
  for (int i = 0; i < m; ++i) a(i) = std::polar(1.0, static_cast<double>(i) * phase);
  return a;
}

CMatrix steering_matrix(std::span<const double> phases, int m) {
  CMatrix A(m, static_cast<Eigen::Index>(phases.size()));
  for (std::size_t l = 0; l < phases.size(); ++l) {
    A.col(static_cast<Eigen::Index>(l)) = steering_vector(phases[l], m);
  }
  return A;
}

namespace {

double clamped_acos(double arg, double tol, const char* what) {
  if (!std::isfinite(arg) || std::abs(arg) > 1.0 + tol) {
    throw Error(ErrorCode::OutOfRange,
                std::string(what) + " arccos argument " + std::to_string(arg) + " outside [-1, 1]");
  }
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

}  // namespace

DirectionPair direction_from_electrical(const ElectricalAngles& ea, const ArrayConfig& cfg,
                                        const InversionOptions& opts) {
  const double scale = cfg.phase_scale();
  const double theta = clamped_acos(ea.psi / scale, opts.clamp_tol, "elevation");
  const double sin_theta = std::sin(theta);
  if (sin_theta < std::sin(deg_to_rad(opts.guard_deg))) {
    throw Error(ErrorCode::DegenerateElevation,
                "elevation " + std::to_string(rad_to_deg(theta)) +
                    " deg is inside the guard band; azimuth undefined");
  }
  const double phi = clamped_acos(ea.xi / (scale * sin_theta), opts.clamp_tol, "azimuth");
  return DirectionPair(rad_to_deg(theta), rad_to_deg(phi));
}

double wrap_angle(double rad) {
  double w = std::remainder(rad, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace laoa
