#include "laoa/linalg.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "laoa/error.hpp"
#include "laoa/synthesis.hpp"
#include "test_util.hpp"

namespace laoa {
namespace {

using testing::random_cmatrix;

void expect_svd_invariants(const CMatrix& A, const SvdResult& f) {
  const auto r = std::min(A.rows(), A.cols());
  ASSERT_EQ(f.sigma.size(), r);
  ASSERT_EQ(f.U.rows(), A.rows());
  ASSERT_EQ(f.U.cols(), r);
  ASSERT_EQ(f.V.rows(), A.cols());
  ASSERT_EQ(f.V.cols(), r);
  for (Eigen::Index i = 0; i < r; ++i) {
    EXPECT_GE(f.sigma(i), 0.0);
    if (i > 0) EXPECT_LE(f.sigma(i), f.sigma(i - 1));
  }
  const CMatrix I = CMatrix::Identity(r, r);
  EXPECT_LT((f.U.adjoint() * f.U - I).operatorNorm(), 1e-10);
  EXPECT_LT((f.V.adjoint() * f.V - I).operatorNorm(), 1e-10);
  const CMatrix rebuilt = f.U * f.sigma.asDiagonal() * f.V.adjoint();
  const double scale = std::max(A.norm(), 1e-300);
  EXPECT_LT((rebuilt - A).norm() / scale, 1e-10);
  // Phase convention.
  for (Eigen::Index j = 0; j < f.V.cols(); ++j) {
    for (Eigen::Index i = 0; i < f.V.rows(); ++i) {
      if (std::abs(f.V(i, j)) > 1e-12) {
        EXPECT_EQ(f.V(i, j).imag(), 0.0);
        EXPECT_GT(f.V(i, j).real(), 0.0);
        break;
      }
    }
  }
}

TEST(Svd, DiagonalInput) {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 3.0;
  A(1, 1) = 1.0;
  const auto f = svd(A);
  EXPECT_DOUBLE_EQ(f.sigma(0), 3.0);
  EXPECT_DOUBLE_EQ(f.sigma(1), 1.0);
  EXPECT_LT(testing::max_abs_diff(f.U, CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(testing::max_abs_diff(f.V, CMatrix::Identity(2, 2)), 1e-15);
}

TEST(Svd, UnsortedDiagonalIsSorted) {
  CMatrix A = CMatrix::Zero(3, 3);
  A(0, 0) = 1.0;
  A(1, 1) = Complex(0, 5);
  A(2, 2) = -2.0;
  const auto f = svd(A);
  EXPECT_DOUBLE_EQ(f.sigma(0), 5.0);
  EXPECT_DOUBLE_EQ(f.sigma(1), 2.0);
  EXPECT_DOUBLE_EQ(f.sigma(2), 1.0);
  expect_svd_invariants(A, f);
}

TEST(Svd, ZeroMatrix) {
  const CMatrix A = CMatrix::Zero(3, 2);
  const auto f = svd(A);
  EXPECT_EQ(f.sigma(0), 0.0);
  EXPECT_EQ(f.sigma(1), 0.0);
  expect_svd_invariants(A, f);
}

TEST(Svd, RejectsBadInput) {
  EXPECT_THROW(svd(CMatrix(0, 0)), Error);
  CMatrix A = CMatrix::Ones(2, 2);
  A(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(A), Error);
}

TEST(Svd, MatchesAdjointProductEigenvalues) {
  std::mt19937_64 rng(31);
  const CMatrix A = random_cmatrix(6, 4, rng);
  const auto f = svd(A);
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(A.adjoint() * A);
  const RVector ev = eig.eigenvalues().reverse();  // descending
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(f.sigma(i) * f.sigma(i), ev(i), 1e-8 * ev(i));
  }
  expect_svd_invariants(A, f);
}

TEST(Svd, InvariantsOverShapes) {
  std::mt19937_64 rng(32);
  for (int rows = 1; rows <= 9; ++rows) {
    for (int cols = 1; cols <= 9; ++cols) {
      const CMatrix A = random_cmatrix(rows, cols, rng);
      SCOPED_TRACE(::testing::Message() << rows << "x" << cols);
      expect_svd_invariants(A, svd(A));
    }
  }
}

TEST(Svd, RankDeficientInputCompletesBasis) {
  std::mt19937_64 rng(33);
  const CMatrix A = random_cmatrix(10, 2, rng) * random_cmatrix(2, 5, rng);
  const auto f = svd(A);
  EXPECT_LT(f.sigma(2), 1e-12 * f.sigma(0));
  expect_svd_invariants(A, f);
}

TEST(Svd, Deterministic) {
  std::mt19937_64 rng(34);
  const CMatrix A = random_cmatrix(12, 7, rng);
  const auto a = svd(A);
  const auto b = svd(A);
  EXPECT_TRUE(a.U == b.U);
  EXPECT_TRUE(a.V == b.V);
  EXPECT_TRUE(a.sigma == b.sigma);
}

TEST(TruncatedPseudoinverse, DiagonalTruncation) {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 2.0;
  A(1, 1) = 1.0;
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  EXPECT_LT(testing::max_abs_diff(truncated_pseudoinverse(A, 1), expected), 1e-15);
}

TEST(TruncatedPseudoinverse, Identity) {
  const CMatrix I = CMatrix::Identity(3, 3);
  EXPECT_LT(testing::max_abs_diff(truncated_pseudoinverse(I, 3), I), 1e-15);
}

TEST(TruncatedPseudoinverse, FullRankMatchesNormalEquations) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix A = random_cmatrix(8, 3, rng);
    const CMatrix oracle = (A.adjoint() * A).inverse() * A.adjoint();
    const CMatrix pinv = truncated_pseudoinverse(A, 3);
    ASSERT_EQ(pinv.rows(), 3);
    ASSERT_EQ(pinv.cols(), 8);
    EXPECT_LT((pinv - oracle).norm(), 1e-8 * oracle.norm());
  }
}

TEST(TruncatedPseudoinverse, RankOutOfRange) {
  const CMatrix A = CMatrix::Ones(4, 3);
  for (int bad : {0, 4, -1}) {
    try {
      truncated_pseudoinverse(A, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RankOutOfRange);
    }
  }
}

TEST(TruncatedPseudoinverse, GeneralisedInverseAtNumericalRank) {
  std::mt19937_64 rng(36);
  for (int r = 1; r <= 4; ++r) {
    const CMatrix A = random_cmatrix(9, r, rng) * random_cmatrix(r, 6, rng);
    const CMatrix pinv = truncated_pseudoinverse(A, r);
    EXPECT_LT((A * pinv * A - A).norm(), 1e-8 * A.norm());
    // Asking for more rank than exists drops the numerically-zero values.
    const CMatrix over = truncated_pseudoinverse(A, 6);
    EXPECT_LT((A * over * A - A).norm(), 1e-8 * A.norm());
  }
}

TEST(TruncatedPseudoinverse, InvertsOnLeadingLeftSingularSpace) {
  std::mt19937_64 rng(37);
  const CMatrix A = random_cmatrix(10, 6, rng);
  const auto f = svd(A);
  for (int r = 1; r <= 6; ++r) {
    const CMatrix pinv = truncated_pseudoinverse(A, r);
    const CVector b = f.U.leftCols(r) * random_cmatrix(r, 1, rng);
    EXPECT_LT((A * (pinv * b) - b).norm(), 1e-8 * b.norm());
  }
}

TEST(EffectiveRank, DropsTinySingularValues) {
  RVector s(4);
  s << 10.0, 1.0, 1e-12, 0.0;
  EXPECT_EQ(effective_rank(s, 4), 2);
  EXPECT_EQ(effective_rank(s, 1), 1);
  EXPECT_EQ(effective_rank(RVector::Zero(3), 3), 0);
}

LpSystem noiseless_system(std::initializer_list<DirectionPair> dirs, int m, int M,
                          std::uint64_t seed) {
  SourceSet src;
  src.directions = dirs;
  Rng rng(seed);
  return build_lp_system(synthesize(src, ArrayConfig(m, 0.5), M, 0.0, rng).z);
}

TEST(SolveCoeffs, SingleSourceQuarterTurn) {
  const LpSystem sys = noiseless_system({{60, 45}}, 2, 8, 1);
  for (auto mode : {SolveMode::PlainLeastSquares, SolveMode::TruncatedSvd}) {
    const auto c = solve_coeffs(sys, 1, mode);
    ASSERT_EQ(c.c.size(), 1);
    EXPECT_LT(std::abs(c.c(0) - Complex(0, 1)), 1e-14);
  }
}

TEST(SolveCoeffs, IdentitySystem) {
  LpSystem sys;
  sys.P = CMatrix::Identity(4, 4);
  sys.P1 = CVector(4);
  sys.P1 << Complex(1, 2), Complex(-3, 0), Complex(0, 0.5), Complex(7, -1);
  const auto c = solve_coeffs(sys, 4, SolveMode::TruncatedSvd);
  EXPECT_LT((c.c - sys.P1).norm(), 1e-15);
  EXPECT_FALSE(c.rank_deficient);
}

TEST(SolveCoeffs, NoiselessPolynomialVanishesAtSignalRoots) {
  const ArrayConfig cfg(6, 0.5);
  const DirectionPair d1(50, 40);
  const DirectionPair d2(100, 130);
  const LpSystem sys = noiseless_system({d1, d2}, 6, 40, 2);
  for (auto mode : {SolveMode::PlainLeastSquares, SolveMode::TruncatedSvd}) {
    const auto c = solve_coeffs(sys, 2, mode);
    for (const auto& d : {d1, d2}) {
      const Complex y = std::polar(1.0, psi_from_direction(d, cfg));
      Complex p = 1.0;
      Complex yk = 1.0;
      for (Eigen::Index k = 0; k < c.c.size(); ++k) {
        yk *= y;
        p += c.c(k) * yk;
      }
      EXPECT_LT(std::abs(p), 1e-8);
    }
  }
}

TEST(SolveCoeffs, ModesAgreeOnFullRankNoiselessSystem) {
  // q = m - 1: P has full column rank.
  const LpSystem sys = noiseless_system({{40, 30}, {85, 100}, {130, 160}}, 4, 20, 3);
  const auto plain = solve_coeffs(sys, 3, SolveMode::PlainLeastSquares);
  const auto tsvd = solve_coeffs(sys, 3, SolveMode::TruncatedSvd);
  EXPECT_EQ(plain.effective_rank, 3);
  EXPECT_LT((plain.c - tsvd.c).norm(), 1e-8 * plain.c.norm());
}

TEST(SolveCoeffs, FlagsRankDeficiency) {
  const LpSystem sys = noiseless_system({{50, 40}, {100, 130}}, 6, 30, 4);
  const auto c = solve_coeffs(sys, 3, SolveMode::TruncatedSvd);
  EXPECT_TRUE(c.rank_deficient);
  EXPECT_EQ(c.effective_rank, 2);
  const auto plain = solve_coeffs(sys, 3, SolveMode::PlainLeastSquares);
  EXPECT_FALSE(plain.rank_deficient);
  EXPECT_EQ(plain.effective_rank, 2);
}

TEST(SolveCoeffs, RejectsBadSourceCount) {
  const LpSystem sys = noiseless_system({{60, 45}}, 4, 8, 5);
  EXPECT_THROW(solve_coeffs(sys, 0, SolveMode::TruncatedSvd), Error);
  EXPECT_THROW(solve_coeffs(sys, 4, SolveMode::TruncatedSvd), Error);
}

}  // namespace
}  // namespace laoa
