#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "laoa/types.hpp"

namespace laoa {

/// Relative residual |P(r)| / (1 + sum |c_k| |r|^k) of
/// P(y) = 1 + c_1 y + ... + c_n y^n.
double relative_residual(std::span<const Complex> coeffs, Complex root);

/// All roots of 1 + c_1 y + ... + c_n y^n via Aberth-Ehrlich iteration.
/// Highest-degree coefficients below 1e-12 * max(1, max|c_k|) are stripped
/// first. Roots come back sorted by principal angle, then magnitude.
/// Throws Error(DegreeZero) when nothing is left after stripping and
/// Error(ConvergenceFailure) when the iteration budget runs out or a root
/// misses the 1e-8 relative residual bound.
std::vector<Complex> find_roots(std::span<const Complex> coeffs);

/// Indices of the q roots with magnitude closest to one, ordered by
/// ascending principal angle. Throws Error(NotEnoughRoots) if q exceeds the
/// number of roots.
std::vector<std::size_t> select_unit_roots(std::span<const Complex> roots, int q);

/// Principal argument in (-pi, pi].
double principal_angle(Complex z);

std::vector<double> electrical_angles_from_roots(std::span<const Complex> roots,
                                                 std::span<const std::size_t> selected);

struct RootSet {
  std::vector<Complex> roots;
  std::vector<std::size_t> selected;
  std::vector<double> residuals;
};

/// find_roots + select_unit_roots with per-root residual diagnostics.
RootSet solve_polynomial(std::span<const Complex> coeffs, int q);

/// Accepting threshold for residuals on noiseless data.
inline constexpr double kRootResidualTol = 1e-6;

}  // namespace laoa
