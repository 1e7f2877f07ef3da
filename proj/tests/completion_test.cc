// Copyright 2026 The LDP Ratings Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldp/completion.h"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "ldp/errors.h"
#include "ldp/random.h"

namespace ldp {
namespace {

Matrix RandomLowRank(int m, int n, int r, RandomStream& rng) {
  Matrix u(m, r), v(n, r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < m; ++i) u(i, j) = rng.StandardNormal();
    for (int i = 0; i < n; ++i) v(i, j) = rng.StandardNormal();
  }
  return u * v.transpose();
}

Mask RandomMask(int m, int n, double p, RandomStream& rng) {
  Mask mask(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) mask(i, j) = rng.Bernoulli(p);
  }
  return mask;
}

// Independent oracle: square roots of the eigenvalues of A^T A.
double EigenNuclearNorm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.transpose() * a);
  return solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

TEST(ProjectTest, FullMaskIsIdentityEmptyMaskIsZero) {
  RandomStream rng(1);
  const Matrix a = RandomLowRank(6, 5, 3, rng);
  const RatingMatrix full = Project(a, Mask::Constant(6, 5, true));
  EXPECT_EQ(full.values, a);
  const RatingMatrix none = Project(a, Mask::Constant(6, 5, false));
  EXPECT_EQ(none.values, Matrix::Zero(6, 5));
  EXPECT_EQ(none.observed_count(), 0);
}

TEST(ProjectTest, IdempotentAndContractive) {
  RandomStream rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = RandomLowRank(8, 7, 2, rng);
    const Mask mask = RandomMask(8, 7, 0.4, rng);
    const RatingMatrix once = Project(a, mask);
    EXPECT_EQ(Project(once.values, mask).values, once.values);
    EXPECT_LE(once.values.norm(), a.norm());
  }
}

TEST(ProjectTest, ShapeMismatchThrows) {
  EXPECT_THROW(Project(Matrix::Zero(2, 3), Mask::Constant(3, 2, true)),
               InvalidParameterError);
}

TEST(ComputeRhoTest, KnownValues) {
  const Matrix theta = Matrix::Ones(2, 2);
  RatingMatrix z{theta, Mask::Constant(2, 2, true)};
  EXPECT_EQ(ComputeRho(theta, z), 0.0);
  // Two observed entries off by 3 and 0; the unobserved one is ignored.
  z.values << 4.0, 1.0, 100.0, 1.0;
  z.mask << true, true, false, false;
  EXPECT_DOUBLE_EQ(ComputeRho(theta, z), 3.0);
}

TEST(ComputeRhoTest, MatchesEntrywiseSum) {
  RandomStream rng(3);
  const Matrix theta = RandomLowRank(9, 11, 2, rng);
  const Matrix noisy = RandomLowRank(9, 11, 4, rng);
  const RatingMatrix z = Project(noisy, RandomMask(9, 11, 0.5, rng));
  double sum = 0.0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 11; ++j) {
      if (z.mask(i, j)) sum += std::pow(theta(i, j) - noisy(i, j), 2);
    }
  }
  EXPECT_NEAR(ComputeRho(theta, z), std::sqrt(sum), 1e-12 * std::sqrt(sum));
}

TEST(RipAlphaTest, DegenerateMasks) {
  RandomStream rng(4);
  EXPECT_NEAR(RipAlphaEstimate(Mask::Constant(10, 10, true), 1.0, 2, 5, rng), 0.0,
              1e-14);
  EXPECT_EQ(RipAlphaEstimate(Mask::Constant(10, 10, false), 0.5, 2, 5, rng), 1.0);
  EXPECT_THROW(RipAlphaEstimate(Mask::Constant(3, 3, true), 0.5, 1, 0, rng),
               InvalidParameterError);
  EXPECT_THROW(RipAlphaEstimate(Mask::Constant(3, 3, true), 0.0, 1, 1, rng),
               InvalidParameterError);
}

TEST(RipAlphaTest, BernoulliMaskIsNearIsometry) {
  RandomStream rng(5);
  const Mask mask = RandomMask(100, 100, 0.5, rng);
  const double alpha = RipAlphaEstimate(mask, 0.5, 2, 20, rng);
  EXPECT_GT(alpha, 0.0);
  EXPECT_LT(alpha, 0.5);
}

TEST(NuclearNormTest, SimpleMatrices) {
  EXPECT_NEAR(NuclearNorm(Matrix::Identity(4, 4)), 4.0, 1e-12);
  EXPECT_EQ(NuclearNorm(Matrix::Zero(3, 2)), 0.0);
  Eigen::VectorXd u(3), v(2);
  u << 1, 2, 2;
  v << 3, 4;
  // Rank one: ||u|| ||v|| = 3 * 5.
  EXPECT_NEAR(NuclearNorm(u * v.transpose()), 15.0, 1e-12);
  EXPECT_EQ(NumericalRank(u * v.transpose()), 1);
}

TEST(NuclearNormTest, MatchesEigenOracle) {
  RandomStream rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = RandomLowRank(12, 9, 9, rng);
    EXPECT_NEAR(NuclearNorm(a), EigenNuclearNorm(a), 1e-8 * NuclearNorm(a));
  }
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(NuclearNorm(bad), InvalidParameterError);
}

TEST(SolverTest, LargeRhoGivesZero) {
  RandomStream rng(7);
  const RatingMatrix z = Project(RandomLowRank(6, 6, 2, rng), RandomMask(6, 6, 0.7, rng));
  const CompletionResult result = SolveCompletion(z, z.values.norm() * 1.01);
  EXPECT_TRUE(result.converged);
  EXPECT_EQ(result.estimate, Matrix::Zero(6, 6));
  EXPECT_EQ(result.nuclear_norm, 0.0);
}

TEST(SolverTest, FullMaskZeroRhoReturnsInput) {
  RandomStream rng(8);
  const Matrix a = RandomLowRank(10, 8, 3, rng);
  const CompletionResult result =
      SolveCompletion(Project(a, Mask::Constant(10, 8, true)), 0.0);
  EXPECT_LE((result.estimate - a).norm(), 1e-9 * a.norm());
  EXPECT_EQ(result.constraint_residual, 0.0);
}

TEST(SolverTest, NoiselessExactRecovery) {
  RandomStream rng(9);
  const Matrix theta = RandomLowRank(30, 30, 2, rng);
  const RatingMatrix z = Project(theta, RandomMask(30, 30, 0.6, rng));
  const double rho = 1e-6;
  const CompletionResult result = SolveCompletion(z, rho);
  EXPECT_TRUE(result.converged);
  EXPECT_LE(result.constraint_residual, rho * (1.0 + 1e-3));
  EXPECT_LE(EstimationError(result.estimate, theta) / theta.norm(), 1e-3);
  EXPECT_NEAR(result.nuclear_norm, NuclearNorm(theta), 1e-3 * NuclearNorm(theta));
  EXPECT_EQ(NumericalRank(theta), 2);
}

TEST(SolverTest, FeasibleAndNoWorseThanTruth) {
  RandomStream rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix theta = RandomLowRank(25, 20, 2, rng);
    Matrix noisy = theta;
    for (Eigen::Index k = 0; k < noisy.size(); ++k) {
      noisy.data()[k] += 0.3 * rng.StandardNormal();
    }
    const RatingMatrix z = Project(noisy, RandomMask(25, 20, 0.6, rng));
    // With rho set to the realized error, the truth is a feasible point.
    const double rho = ComputeRho(theta, z);
    const CompletionResult result = SolveCompletion(z, rho);
    ASSERT_TRUE(result.converged);
    EXPECT_LE(result.constraint_residual, rho * (1.0 + 1e-3));
    EXPECT_NEAR(ComputeRho(result.estimate, z), result.constraint_residual,
                1e-9 * rho);
    EXPECT_LE(result.nuclear_norm, NuclearNorm(theta) * (1.0 + 1e-3));
    EXPECT_NEAR(result.nuclear_norm, EigenNuclearNorm(result.estimate),
                1e-6 * result.nuclear_norm);
  }
}

TEST(SolverTest, ErrorGrowsWithRadius) {
  int concordant = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng = RandomStream::ForSubstream(77, seed);
    const Matrix theta = RandomLowRank(20, 20, 2, rng);
    Matrix noisy = theta;
    for (Eigen::Index k = 0; k < noisy.size(); ++k) {
      noisy.data()[k] += 0.1 * rng.StandardNormal();
    }
    const RatingMatrix z = Project(noisy, RandomMask(20, 20, 0.6, rng));
    const double rho = ComputeRho(theta, z);
    double previous = -1.0;
    bool monotone = true;
    for (double scale : {1.0, 3.0, 9.0}) {
      const CompletionResult result = SolveCompletion(z, scale * rho);
      const double error = EstimationError(result.estimate, theta);
      monotone = monotone && error > previous;
      previous = error;
    }
    if (monotone) ++concordant;
  }
  EXPECT_GE(concordant, 16);
}

TEST(SolverTest, Deterministic) {
  RandomStream rng(11);
  const Matrix theta = RandomLowRank(15, 12, 2, rng);
  const RatingMatrix z = Project(theta, RandomMask(15, 12, 0.5, rng));
  const CompletionResult a = SolveCompletion(z, 0.5);
  const CompletionResult b = SolveCompletion(z, 0.5);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolverTest, RejectsBadArguments) {
  const RatingMatrix z{Matrix::Ones(3, 3), Mask::Constant(3, 3, true)};
  EXPECT_THROW(SolveCompletion(z, -1.0), InvalidParameterError);
  EXPECT_THROW(SolveCompletion(z, std::numeric_limits<double>::infinity()),
               InvalidParameterError);
  const RatingMatrix empty{Matrix::Ones(3, 3), Mask::Constant(3, 3, false)};
  EXPECT_THROW(SolveCompletion(empty, 1.0), InvalidParameterError);
  SolverConfig config;
  config.max_iterations = 0;
  EXPECT_THROW(SolveCompletion(z, 1.0, config), InvalidParameterError);
  config = {};
  config.constraint_tolerance = 1.5;
  EXPECT_THROW(SolveCompletion(z, 1.0, config), InvalidParameterError);
}

TEST(EstimationErrorTest, FrobeniusDistance) {
  Matrix a = Matrix::Zero(2, 2);
  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 3.0;
  b(1, 1) = 4.0;
  EXPECT_DOUBLE_EQ(EstimationError(a, b), 5.0);
  EXPECT_THROW(EstimationError(a, Matrix::Zero(3, 2)), InvalidParameterError);
}

}  // namespace
}  // namespace ldp
