#pragma once

#include "laoa/types.hpp"

namespace laoa {

/// Thin SVD A = U diag(sigma) V^H with r = min(rows, cols) columns in U
/// and V. sigma is non-increasing. The first entry of each V column whose
/// magnitude exceeds 1e-12 is real and non-negative.
struct SvdResult {
  CMatrix U;
  RVector sigma;
  CMatrix V;
};

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankRelTol = 1e-10;

/// One-sided complex Jacobi SVD. Throws Error(InvalidArgument) for empty or
/// non-finite input and Error(ConvergenceFailure) after 100*min(rows, cols)
/// sweeps without convergence.
SvdResult svd(const CMatrix& A);

/// Number of leading singular values kept when truncating to `rank` and
/// discarding values below kRankRelTol * sigma[0].
int effective_rank(const RVector& sigma, int rank);

/// V * inv(Sigma_1) * U^H keeping the `rank` largest singular values.
/// Throws Error(RankOutOfRange) unless 1 <= rank <= min(rows, cols).
CMatrix truncated_pseudoinverse(const CMatrix& A, int rank);

enum class SolveMode { PlainLeastSquares, TruncatedSvd };

struct CoefficientVector {
  CVector c;  // c_1 .. c_{m-1}; the constant term is implicitly 1
  int effective_rank = 0;
  bool rank_deficient = false;  // truncation rank reduced below q
};

struct LpSystem;

/// PlainLeastSquares: minimum-norm least-squares solution with numerical
/// rank detection. TruncatedSvd: pseudoinverse truncated to q singular
/// values. Throws Error(InvalidArgument) unless 1 <= q <= m-1.
CoefficientVector solve_coeffs(const LpSystem& sys, int q, SolveMode mode);

}  // namespace laoa
