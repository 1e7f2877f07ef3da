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

#ifndef LDP_UTILITY_H_
#define LDP_UTILITY_H_

// Utility of privatized ratings: the high-probability upper bounds on the
// observation error rho = ||P_Omega_Z(Theta - Z)||_F, the synthetic
// Theta -> X -> Z generating pipeline, and Monte Carlo coverage of the
// bounds.

#include <cstdint>
#include <string>
#include <vector>

#include "ldp/completion.h"
#include "ldp/mechanisms.h"
#include "ldp/random.h"

namespace ldp {

struct UtilityBoundInputs {
  // Per-entry intrinsic noise scale: ||P_Omega_X(Theta - X)||_F <= rho0 sqrt(s).
  double rho0 = 0.0;
  // Number of present ratings in X.
  int64_t s = 0;
  double epsilon = 1.0;
  // Failure probability of the bound, in (0, 1).
  double gamma = 0.1;
  int64_t m = 1;
  int64_t n = 1;
  // Star levels; randomized response only.
  int d = 1;

  void Validate() const;
};

// rho0 sqrt(s) + (4/eps) sqrt(s/gamma)
//   + sqrt(2mn / ((e^{eps/2} + 1) gamma) * (1 + 8/eps^2))
double BoundModifiedLaplace(const UtilityBoundInputs& inputs);
// rho0 sqrt(s) + 2(d-1) sqrt(2mnd / ((e^eps + d) gamma))
double BoundRandomizedResponse(const UtilityBoundInputs& inputs);
double Bound(Mechanism mechanism, const UtilityBoundInputs& inputs);

enum class ValueScale { kContinuous, kStars };

struct GroundTruthSpec {
  int m = 50;
  int n = 50;
  int r = 2;
  ValueScale scale = ValueScale::kContinuous;
  // Star levels when scale == kStars.
  int d = 5;
  double p_obs = 0.5;
  double rho0 = 0.05;

  void Validate() const;
};

// U V^T divided by its largest absolute entry (left as is when zero).
Matrix LowRankFromFactors(const Matrix& u, const Matrix& v);

// Theta = U V^T with U, V uniform on [-1, 1], rescaled into [-1, 1]. For
// the star scale each entry is then mapped to the nearest star level.
Matrix GenerateGroundTruth(const GroundTruthSpec& spec, RandomStream& rng);

// X: each entry observed with probability p_obs and perturbed by
// u ~ Uniform[-rho0, rho0]. Continuous values are clamped into [-1, 1];
// star values move by u truncated toward zero and are clamped into [1, d].
// Either way |X_ij - Theta_ij| <= rho0 on the mask.
RatingMatrix Observe(const Matrix& theta, const GroundTruthSpec& spec,
                     RandomStream& rng);

// Applies the vector mechanism to each row (user), row i drawing from
// RandomStream::ForSubstream(seed, i). Unobserved entries of X are fed in
// as Missing (category 0 for randomized response); Omega_Z is the set of
// non-missing outputs.
RatingMatrix PrivatizeMatrix(const RatingMatrix& x, Mechanism mechanism,
                             PrivacyBudget epsilon, int d, uint64_t seed);

struct PipelineSample {
  Matrix theta;
  RatingMatrix x;
  RatingMatrix z;
};

PipelineSample SimulatePipeline(const GroundTruthSpec& spec,
                                Mechanism mechanism, PrivacyBudget epsilon,
                                uint64_t seed);

// The three terms of the triangle inequality on rho.
struct RhoDecomposition {
  double rho = 0.0;
  // ||P_{Z cap X}(Theta - X)||_F
  double intrinsic = 0.0;
  // ||P_{Z cap X}(X - Z)||_F
  double mechanism = 0.0;
  // ||P_{Z \ X}(Theta - Z)||_F
  double fabricated = 0.0;
  int64_t kept_count = 0;
  int64_t fabricated_count = 0;
};

RhoDecomposition DecomposeRho(const Matrix& theta, const RatingMatrix& x,
                              const RatingMatrix& z);

struct TrialRecord {
  int trial = 0;
  uint64_t seed = 0;
  Mechanism mechanism = Mechanism::kModifiedLaplace;
  double epsilon = 0.0;
  int64_t s = 0;
  double rho = 0.0;
  double bound = 0.0;
  bool within_bound = false;
  double recovery_error = 0.0;
  bool converged = false;
  int rank = 0;
  // |Omega_Z| / (m n).
  double observed_fraction = 0.0;
};

TrialRecord RunTrial(const GroundTruthSpec& spec, Mechanism mechanism,
                     PrivacyBudget epsilon, double gamma, uint64_t seed,
                     const SolverConfig& config = {});

struct CoverageSummary {
  double coverage = 0.0;
  std::vector<TrialRecord> trials;
  // Seeds of trials whose realized rho exceeded the bound.
  std::vector<uint64_t> violations;
};

// Runs `trials` (>= 100) independent trials with seeds base_seed + index,
// spread over the available hardware threads.
CoverageSummary CoverageEstimate(const GroundTruthSpec& spec,
                                 Mechanism mechanism, PrivacyBudget epsilon,
                                 double gamma, int trials, uint64_t base_seed,
                                 const SolverConfig& config = {});

// Solver settings used by the experiment pipeline.
SolverConfig ExperimentSolverConfig();

}  // namespace ldp

#endif  // LDP_UTILITY_H_
