#include "laoa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "laoa/error.hpp"
#include "laoa/synthesis.hpp"

namespace laoa {
namespace {

// One-sided (Hestenes) Jacobi on a matrix with rows >= cols. Columns of G
// are rotated pairwise until mutually orthogonal; G = A V throughout.
SvdResult jacobi_tall(const CMatrix& A) {
  const Eigen::Index rows = A.rows();
  const Eigen::Index n = A.cols();
  CMatrix G = A;
  CMatrix V = CMatrix::Identity(n, n);

  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(rows);
  const Eigen::Index budget = 100 * std::max<Eigen::Index>(n, 1);
  bool converged = false;
  for (Eigen::Index sweep = 0; sweep < budget && !converged; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double alpha = G.col(p).squaredNorm();
        const double beta = G.col(r).squaredNorm();
        const Complex gamma = G.col(p).dot(G.col(r));  // g_p^H g_r
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;

        // Rotate g_r by the phase of gamma so the pair's inner product is
        // real, then apply a real Jacobi rotation.
        const Complex unphase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < rows; ++i) {
          const Complex gp = G(i, p);
          const Complex gr = G(i, r) * unphase;
          G(i, p) = c * gp - s * gr;
          G(i, r) = s * gp + c * gr;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vp = V(i, p);
          const Complex vr = V(i, r) * unphase;
          V(i, p) = c * vp - s * vr;
          V(i, r) = s * vp + c * vr;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw Error(ErrorCode::ConvergenceFailure,
                "Jacobi SVD did not converge within " + std::to_string(budget) + " sweeps");
  }

  std::vector<double> norms(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) norms[static_cast<std::size_t>(j)] = G.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return norms[static_cast<std::size_t>(a)] > norms[static_cast<std::size_t>(b)];
  });

  SvdResult out;
  out.U = CMatrix::Zero(rows, n);
  out.V = CMatrix(n, n);
  out.sigma = RVector(n);
  Eigen::Index filled = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    const double sv = norms[static_cast<std::size_t>(src)];
    out.sigma(j) = sv;
    out.V.col(j) = V.col(src);
    if (sv > 0.0) {
      out.U.col(j) = G.col(src) / sv;
      filled = j + 1;
    }
  }

  // Zero singular values leave U columns undetermined; complete them to an
  // orthonormal set from the best-projected canonical basis vector.
  for (Eigen::Index j = filled; j < n; ++j) {
    CVector best;
    double best_norm = -1.0;
    for (Eigen::Index k = 0; k < rows; ++k) {
      CVector v = CVector::Unit(rows, k);
      for (int pass = 0; pass < 2; ++pass) {
        v -= out.U.leftCols(j) * (out.U.leftCols(j).adjoint() * v);
      }
      const double nv = v.norm();
      if (nv > best_norm + 1e-12) {
        best_norm = nv;
        best = v;
      }
    }
    out.U.col(j) = best / best_norm;
  }
  return out;
}

void apply_phase_convention(SvdResult& r) {
  for (Eigen::Index j = 0; j < r.V.cols(); ++j) {
    for (Eigen::Index i = 0; i < r.V.rows(); ++i) {
      const double mag = std::abs(r.V(i, j));
      if (mag > 1e-12) {
        const Complex unphase = std::conj(r.V(i, j) / mag);
        r.V.col(j) *= unphase;
        r.U.col(j) *= unphase;
        r.V(i, j) = Complex(r.V(i, j).real(), 0.0);
        break;
      }
    }
  }
}

}  // namespace

SvdResult svd(const CMatrix& A) {
  if (A.size() == 0) throw Error(ErrorCode::InvalidArgument, "svd of an empty matrix");
  if (!A.allFinite()) throw Error(ErrorCode::InvalidArgument, "svd input has non-finite entries");

  SvdResult r;
  if (A.rows() >= A.cols()) {
    r = jacobi_tall(A);
  } else {
    SvdResult t = jacobi_tall(A.adjoint());
    r.U = std::move(t.V);
    r.V = std::move(t.U);
    r.sigma = std::move(t.sigma);
  }
  apply_phase_convention(r);
  return r;
}

int effective_rank(const RVector& sigma, int rank) {
  const int limit = std::min(rank, static_cast<int>(sigma.size()));
  if (limit <= 0 || !(sigma(0) > 0.0)) return 0;
  const double floor = kRankRelTol * sigma(0);
  int k = 0;
  while (k < limit && sigma(k) >= floor) ++k;
  return k;
}

namespace {

CMatrix pinv_from(const SvdResult& f, int kept) {
  const Eigen::Index k = kept;
  const RVector inv = f.sigma.head(k).cwiseInverse();
  return f.V.leftCols(k) * inv.asDiagonal() * f.U.leftCols(k).adjoint();
}

}  // namespace

CMatrix truncated_pseudoinverse(const CMatrix& A, int rank) {
  const auto min_dim = std::min(A.rows(), A.cols());
  if (rank < 1 || rank > min_dim) {
    throw Error(ErrorCode::RankOutOfRange, "truncation rank " + std::to_string(rank) +
                                               " outside [1, " + std::to_string(min_dim) + "]");
  }
  const SvdResult f = svd(A);
  return pinv_from(f, effective_rank(f.sigma, rank));
}

CoefficientVector solve_coeffs(const LpSystem& sys, int q, SolveMode mode) {
  const auto unknowns = sys.P.cols();
  if (unknowns < 1 || sys.P.rows() != sys.P1.size()) {
    throw Error(ErrorCode::InvalidArgument, "malformed linear-prediction system");
  }
  if (q < 1 || q > unknowns) {
    throw Error(ErrorCode::InvalidArgument, "source count " + std::to_string(q) +
                                                " outside [1, " + std::to_string(unknowns) + "]");
  }
  const int min_dim = static_cast<int>(std::min(sys.P.rows(), sys.P.cols()));
  const SvdResult f = svd(sys.P);

  CoefficientVector out;
  if (mode == SolveMode::TruncatedSvd) {
    if (q > min_dim) {
      throw Error(ErrorCode::RankOutOfRange,
                  "truncation rank " + std::to_string(q) + " exceeds " + std::to_string(min_dim));
    }
    out.effective_rank = effective_rank(f.sigma, q);
    out.rank_deficient = out.effective_rank < q;
  } else {
    out.effective_rank = effective_rank(f.sigma, min_dim);
  }
  const Eigen::Index k = out.effective_rank;
  const CVector projected = f.U.leftCols(k).adjoint() * sys.P1;
  out.c = f.V.leftCols(k) * (projected.array() / f.sigma.head(k).array()).matrix();
  return out;
}

}  // namespace laoa
