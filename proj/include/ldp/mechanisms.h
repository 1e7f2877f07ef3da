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

#ifndef LDP_MECHANISMS_H_
#define LDP_MECHANISMS_H_

// Local privatization of rating vectors.
//
// Two mechanisms are provided:
//
//  * Modified Laplace, for ratings normalized into [-1, 1]. A present rating
//    is kept with probability e^{eps/2} / (e^{eps/2} + 1) and released as
//    x + Laplace(0, 2/eps); otherwise it is released as Missing. A missing
//    rating stays Missing with the same probability and is otherwise
//    replaced by a fabricated value drawn from Laplace(0, 2/eps).
//
//  * Randomized response over W = {0, 1, ..., d}, with 0 meaning missing and
//    1..d the star levels. The input category is kept with probability
//    e^eps / (e^eps + d) and each other category has probability
//    1 / (e^eps + d).
//
// Each entry costs eps of privacy budget, so a length-n vector is
// (n * eps)-differentially private.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldp/random.h"

namespace ldp {

enum class Mechanism { kModifiedLaplace, kRandomizedResponse };

std::string_view MechanismName(Mechanism mechanism);
// Accepts "mlaplace" and "rr".
Mechanism ParseMechanism(std::string_view name);

// Per-coordinate privacy parameter. Always positive and finite.
class PrivacyBudget {
 public:
  explicit PrivacyBudget(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

// Input to the modified Laplace mechanism: a value in [-1, 1] or Missing.
class ContinuousRating {
 public:
  static ContinuousRating Missing() { return ContinuousRating(std::nullopt); }
  static ContinuousRating Observed(double value);

  bool is_missing() const { return !value_.has_value(); }
  double value() const;

  bool operator==(const ContinuousRating&) const = default;

 private:
  explicit ContinuousRating(std::optional<double> value) : value_(value) {}
  std::optional<double> value_;
};

// Output of the modified Laplace mechanism. The real branch is unbounded:
// x + noise is never clipped back into [-1, 1].
class PerturbedRating {
 public:
  static PerturbedRating Missing() { return PerturbedRating(std::nullopt); }
  static PerturbedRating Released(double value);

  bool is_missing() const { return !value_.has_value(); }
  double value() const;

  bool operator==(const PerturbedRating&) const = default;

 private:
  explicit PerturbedRating(std::optional<double> value) : value_(value) {}
  std::optional<double> value_;
};

// Category 0 of the randomized-response alphabet.
inline constexpr int kMissingStars = 0;

std::string FormatRating(const ContinuousRating& x);

// e^{eps/2} / (e^{eps/2} + 1).
double BernoulliKeepProbability(PrivacyBudget epsilon);

// Inverse CDF of Laplace(0, scale) at u in (0, 1).
double LaplaceInverseCdf(double u, double scale);
// CDF of Laplace(0, scale). Accepts infinite arguments.
double LaplaceCdf(double t, double scale);
// Mass of Laplace(0, scale) on [lo, hi), evaluated without cancellation in
// the tails.
double LaplaceIntervalMass(double lo, double hi, double scale);

// One draw from Laplace(0, scale) by inverse CDF of a single uniform.
double SampleLaplace(double scale, RandomStream& rng);

// Each entry consumes exactly two uniforms (the keep coin, then the noise),
// whatever the outcome.
PerturbedRating PerturbModifiedLaplace(const ContinuousRating& x,
                                       PrivacyBudget epsilon,
                                       RandomStream& rng);
std::vector<PerturbedRating> PerturbModifiedLaplace(
    std::span<const ContinuousRating> x, PrivacyBudget epsilon,
    RandomStream& rng);

// Probability vector p_i(0..d).
std::vector<double> RandomizedResponsePmf(int i, int d, PrivacyBudget epsilon);

// Samples p_x by inverse CDF over categories 0..d using one uniform.
int PerturbRandomizedResponse(int x, int d, PrivacyBudget epsilon,
                              RandomStream& rng);
std::vector<int> PerturbRandomizedResponse(std::span<const int> x, int d,
                                           PrivacyBudget epsilon,
                                           RandomStream& rng);

// E[(X - Z)^2] for a rating released through the real branch: 8 / eps^2.
double ModifiedLaplaceSquaredError(PrivacyBudget epsilon);

// Upper bound (d-1)^2 d / (e^eps + d) on E[(X - Z)^2] for a present rating
// whose randomized-response output is also present.
double RandomizedResponseSquaredErrorBound(int d, PrivacyBudget epsilon);

void ValidateStarScale(int d);
void ValidateCategory(int x, int d);

}  // namespace ldp

#endif  // LDP_MECHANISMS_H_
