#pragma once

#include <span>

#include "laoa/types.hpp"

namespace laoa {

/// Geometry of the L-shaped array: two uniform linear subarrays of `m`
/// elements each (along Z and along X) sharing the reference element at the
/// origin, with inter-element spacing given in wavelengths.
class ArrayConfig {
 public:
  /// Throws Error(InvalidArgument) unless elements >= 2 and
  /// 0 < spacing_ratio <= 0.5.
  ArrayConfig(int elements, double spacing_ratio);

  int elements() const noexcept { return elements_; }
  double spacing_ratio() const noexcept { return spacing_ratio_; }

  /// 2*pi*d/lambda; the electrical angle for a unit direction cosine.
  double phase_scale() const noexcept { return 2.0 * kPi * spacing_ratio_; }

 private:
  int elements_;
  double spacing_ratio_;
};

/// Physical direction in degrees. theta is measured from the Z axis and lies
/// in (0, 180); phi is measured in the XY plane from the X axis and lies in
/// [0, 180]. Azimuths outside that range alias onto their reflection.
class DirectionPair {
 public:
  DirectionPair(double theta_deg, double phi_deg);

  double theta_deg() const noexcept { return theta_deg_; }
  double phi_deg() const noexcept { return phi_deg_; }

  friend bool operator==(const DirectionPair&, const DirectionPair&) = default;

 private:
  double theta_deg_;
  double phi_deg_;
};

/// Per-element phase increments on the Z (psi) and X (xi) subarrays, radians.
struct ElectricalAngles {
  double psi = 0.0;
  double xi = 0.0;
};

struct InversionOptions {
  /// arccos arguments exceeding [-1, 1] by at most this much are clamped.
  double clamp_tol = 1e-9;
  /// Elevations closer than this to 0 or 180 degrees make phi undefined.
  double guard_deg = 1.0;
};

double psi_from_direction(const DirectionPair& dir, const ArrayConfig& cfg);
double xi_from_direction(const DirectionPair& dir, const ArrayConfig& cfg);
ElectricalAngles electrical_from_direction(const DirectionPair& dir, const ArrayConfig& cfg);

/// Element i (0-based) is exp(j*i*phase); element 0 is exactly 1.
CVector steering_vector(double phase, int m);

/// Columns are steering_vector(phases[l], m).
CMatrix steering_matrix(std::span<const double> phases, int m);

/// Inverts the electrical-angle maps. Throws Error(OutOfRange) when an arccos
/// argument leaves [-1 - clamp_tol, 1 + clamp_tol] and
/// Error(DegenerateElevation) when sin(theta) falls below sin(guard).
DirectionPair direction_from_electrical(const ElectricalAngles& ea, const ArrayConfig& cfg,
                                        const InversionOptions& opts = {});

/// Wraps an angle difference into (-pi, pi].
double wrap_angle(double rad);

}  // namespace laoa
