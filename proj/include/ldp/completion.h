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

#ifndef LDP_COMPLETION_H_
#define LDP_COMPLETION_H_

// Recovery of a low-rank rating matrix from a privatized, partially
// observed one by nuclear-norm minimization under a Frobenius-ball
// constraint on the observed entries:
//
//   minimize ||M||_*  subject to  ||P_Omega(M - Z)||_F <= rho.
//
// The program is solved through its penalized form
//
//   minimize 1/2 ||P_Omega(M - Z)||_F^2 + lambda ||M||_*
//
// by accelerated proximal gradient with singular value soft-thresholding
// (unit step, since the masked least-squares gradient is 1-Lipschitz).
// The residual of the penalized solution grows monotonically with lambda,
// and lambda is bisected until the residual lands within a relative
// tolerance of rho.

#include <Eigen/Dense>
#include <cstdint>

#include "ldp/random.h"

namespace ldp {

using Matrix = Eigen::MatrixXd;
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Values plus observation mask. Entries outside the mask carry no
// information and are kept at zero.
struct RatingMatrix {
  Matrix values;
  Mask mask;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  int64_t observed_count() const { return mask.count(); }
};

struct SolverConfig {
  // Proximal-gradient iterations allowed per value of lambda.
  int max_iterations = 5000;
  // Stop when ||M_{k+1} - M_k||_F <= step_tolerance * max(1, ||M_k||_F).
  double step_tolerance = 1e-10;
  // Accept a residual within rho * (1 +- constraint_tolerance).
  double constraint_tolerance = 1e-3;
  int lambda_bisection_steps = 60;
  // Largest number of singular values kept by one thresholding step.
  int rank_cap = 1 << 20;

  void Validate() const;
};

struct CompletionResult {
  Matrix estimate;
  double nuclear_norm = 0.0;
  double constraint_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double lambda = 0.0;
};

// Singular values below this fraction of the largest count as zero.
inline constexpr double kSingularValueCutoff = 1e-10;

// Copies `a` on the mask and zeroes everything else.
RatingMatrix Project(const Matrix& a, const Mask& mask);

// ||P_Omega_Z(theta - Z)||_F with Omega_Z = z.mask.
double ComputeRho(const Matrix& theta, const RatingMatrix& z);

// Largest |(1/p) ||P_Omega(A)||_F^2 / ||A||_F^2 - 1| over `trials` random
// rank-`rank` Gaussian products A = G H^T. An empirical look at the
// restricted isometry constant of the sampling operator, not a bound.
double RipAlphaEstimate(const Mask& mask, double p, int rank, int trials,
                        RandomStream& rng);

double NuclearNorm(const Matrix& a);
// Number of singular values above kSingularValueCutoff * largest.
int NumericalRank(const Matrix& a);

CompletionResult SolveCompletion(const RatingMatrix& z, double rho,
                                 const SolverConfig& config = {});

// Full-matrix Frobenius distance.
double EstimationError(const Matrix& estimate, const Matrix& theta);

}  // namespace ldp

#endif  // LDP_COMPLETION_H_
