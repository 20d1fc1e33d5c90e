#include "laoa/rooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "laoa/error.hpp"

namespace laoa {
namespace {

constexpr double kStripTol = 1e-12;
constexpr double kResidualBound = 1e-8;
constexpr int kMaxIterations = 500;

// Ascending coefficients a_0 = 1, a_1 .. a_n with the n-th non-negligible.
std::vector<Complex> deflated(std::span<const Complex> coeffs) {
  double scale = 1.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  std::size_t degree = coeffs.size();
  while (degree > 0 && std::abs(coeffs[degree - 1]) < kStripTol * scale) --degree;
  std::vector<Complex> a(degree + 1);
  a[0] = 1.0;
  std::copy(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(degree), a.begin() + 1);
  return a;
}

struct Evaluation {
  Complex value;
  Complex derivative;
  double magnitude_sum;  // sum |a_k| |z|^k
};

Evaluation evaluate(const std::vector<Complex>& a, Complex z) {
  const double rz = std::abs(z);
  Complex p = a.back();
  Complex dp = 0.0;
  double mag = std::abs(a.back());
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
    mag = mag * rz + std::abs(a[k]);
  }
  return {p, dp, mag};
}

bool canonical_less(Complex a, Complex b) {
  const double ta = principal_angle(a);
  const double tb = principal_angle(b);
  if (ta != tb) return ta < tb;
  return std::abs(a) < std::abs(b);
}

}  // namespace

double principal_angle(Complex z) {
  const double t = std::arg(z);
  return t <= -kPi ? kPi : t;
}

double relative_residual(std::span<const Complex> coeffs, Complex root) {
  std::vector<Complex> a(coeffs.size() + 1);
  a[0] = 1.0;
  std::copy(coeffs.begin(), coeffs.end(), a.begin() + 1);
  const auto e = evaluate(a, root);
  return std::abs(e.value) / e.magnitude_sum;
}

std::vector<Complex> find_roots(std::span<const Complex> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient vector");
  for (const auto& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
    }
  }
  const std::vector<Complex> a = deflated(coeffs);
  const std::size_t n = a.size() - 1;
  if (n == 0) throw Error(ErrorCode::DegreeZero, "polynomial is the constant 1; no roots");

  std::vector<Complex> z(n);
  if (n == 1) {
    z[0] = -a[0] / a[1];
  } else {
    // Start on the unit circle, offset so no start coincides with +-1 or +-j.
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n) + 0.4);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    int iter = 0;
    for (; iter < kMaxIterations && remaining > 0; ++iter) {
      for (std::size_t k = 0; k < n; ++k) {
        if (done[k]) continue;
        const auto e = evaluate(a, z[k]);
        if (std::abs(e.value) <= 4.0 * eps * e.magnitude_sum) {
          done[k] = true;
          --remaining;
          continue;
        }
        Complex repulsion = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != k) repulsion += 1.0 / (z[k] - z[j]);
        }
        const Complex ratio = e.value / e.derivative;
        const Complex step = ratio / (1.0 - ratio * repulsion);
        z[k] -= step;
        if (std::abs(step) <= eps * std::abs(z[k])) {
          done[k] = true;
          --remaining;
        }
      }
    }
    if (remaining > 0) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "Aberth iteration left " + std::to_string(remaining) + " of " +
                      std::to_string(n) + " roots unconverged after " +
                      std::to_string(kMaxIterations) + " iterations");
    }
  }

  // One Newton step per root, kept only if it lowers the residual.
  for (auto& r : z) {
    const auto e = evaluate(a, r);
    if (e.derivative == Complex(0.0)) continue;
    const Complex polished = r - e.value / e.derivative;
    if (std::abs(evaluate(a, polished).value) < std::abs(e.value)) r = polished;
  }

  const std::span<const Complex> kept(a.data() + 1, n);
  for (const auto& r : z) {
    const double res = relative_residual(kept, r);
    if (!(res <= kResidualBound)) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "root residual " + std::to_string(res) + " exceeds the 1e-8 bound");
    }
  }
  std::sort(z.begin(), z.end(), canonical_less);
  return z;
}

std::vector<std::size_t> select_unit_roots(std::span<const Complex> roots, int q) {
  if (q < 0 || static_cast<std::size_t>(q) > roots.size()) {
    throw Error(ErrorCode::NotEnoughRoots, "requested " + std::to_string(q) + " roots from " +
                                               std::to_string(roots.size()));
  }
  std::vector<std::size_t> order(roots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_less(roots[a], roots[b]);
  });
  auto distance = [&](std::size_t i) { return std::abs(std::abs(roots[i]) - 1.0); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distance(a) < distance(b); });
  order.resize(static_cast<std::size_t>(q));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_less(roots[a], roots[b]);
  });
  return order;
}

std::vector<double> electrical_angles_from_roots(std::span<const Complex> roots,
                                                 std::span<const std::size_t> selected) {
  std::vector<double> out;
  out.reserve(selected.size());
  for (auto i : selected) out.push_back(principal_angle(roots[i]));
  return out;
}

RootSet solve_polynomial(std::span<const Complex> coeffs, int q) {
  RootSet rs;
  rs.roots = find_roots(coeffs);
  rs.selected = select_unit_roots(rs.roots, q);
  rs.residuals.reserve(rs.roots.size());
  for (const auto& r : rs.roots) rs.residuals.push_back(relative_residual(coeffs, r));
  return rs;
}

}  // namespace laoa
