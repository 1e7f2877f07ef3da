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

#include "ldp/mechanisms.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ldp/errors.h"

namespace ldp {

std::string_view MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kModifiedLaplace:
      return "mlaplace";
    case Mechanism::kRandomizedResponse:
      return "rr";
  }
  return "unknown";
}

Mechanism ParseMechanism(std::string_view name) {
  if (name == "mlaplace") return Mechanism::kModifiedLaplace;
  if (name == "rr") return Mechanism::kRandomizedResponse;
  throw InvalidParameterError("unknown mechanism '" + std::string(name) +
                              "' (expected mlaplace or rr)");
}

PrivacyBudget::PrivacyBudget(double epsilon) : epsilon_(epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw InvalidParameterError("epsilon must be positive and finite");
  }
}

ContinuousRating ContinuousRating::Observed(double value) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw InvalidParameterError("continuous rating must lie in [-1, 1]");
  }
  return ContinuousRating(value);
}

double ContinuousRating::value() const {
  if (!value_) throw InvalidParameterError("rating is missing");
  return *value_;
}

PerturbedRating PerturbedRating::Released(double value) {
  if (!std::isfinite(value)) {
    throw InvalidParameterError("released rating must be finite");
  }
  return PerturbedRating(value);
}

double PerturbedRating::value() const {
  if (!value_) throw InvalidParameterError("rating is missing");
  return *value_;
}

std::string FormatRating(const ContinuousRating& x) {
  if (x.is_missing()) return "?";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", x.value());
  return buffer;
}

double BernoulliKeepProbability(PrivacyBudget epsilon) {
  // Same value as e^{eps/2}/(e^{eps/2}+1), without overflow for large eps.
  return 1.0 / (1.0 + std::exp(-0.5 * epsilon.epsilon()));
}

namespace {

void ValidateScale(double scale) {
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw InvalidParameterError("Laplace scale must be positive and finite");
  }
}

}  // namespace

double LaplaceInverseCdf(double u, double scale) {
  ValidateScale(scale);
  if (!(u > 0.0 && u < 1.0)) {
    throw InvalidParameterError("uniform draw must lie in (0, 1)");
  }
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

double LaplaceCdf(double t, double scale) {
  ValidateScale(scale);
  if (t < 0.0) return 0.5 * std::exp(t / scale);
  return 1.0 - 0.5 * std::exp(-t / scale);
}

double LaplaceIntervalMass(double lo, double hi, double scale) {
  ValidateScale(scale);
  if (std::isnan(lo) || std::isnan(hi)) {
    throw InvalidParameterError("interval bounds must not be NaN");
  }
  if (!(lo < hi)) return 0.0;
  if (lo >= 0.0) {
    if (std::isinf(hi)) return 0.5 * std::exp(-lo / scale);
    return -0.5 * std::exp(-lo / scale) * std::expm1((lo - hi) / scale);
  }
  if (hi <= 0.0) {
    if (std::isinf(lo)) return 0.5 * std::exp(hi / scale);
    return -0.5 * std::exp(hi / scale) * std::expm1((lo - hi) / scale);
  }
  return 1.0 - 0.5 * std::exp(-hi / scale) - 0.5 * std::exp(lo / scale);
}

double SampleLaplace(double scale, RandomStream& rng) {
  ValidateScale(scale);
  return LaplaceInverseCdf(rng.Uniform01(), scale);
}

PerturbedRating PerturbModifiedLaplace(const ContinuousRating& x,
                                       PrivacyBudget epsilon,
                                       RandomStream& rng) {
  const double keep = BernoulliKeepProbability(epsilon);
  const double scale = 2.0 / epsilon.epsilon();
  const bool zeta = rng.Uniform01() < keep;
  const double xi = SampleLaplace(scale, rng);
  if (x.is_missing()) {
    return zeta ? PerturbedRating::Missing() : PerturbedRating::Released(xi);
  }
  return zeta ? PerturbedRating::Released(x.value() + xi)
              : PerturbedRating::Missing();
}

std::vector<PerturbedRating> PerturbModifiedLaplace(
    std::span<const ContinuousRating> x, PrivacyBudget epsilon,
    RandomStream& rng) {
  std::vector<PerturbedRating> out;
  out.reserve(x.size());
  for (const ContinuousRating& entry : x) {
    out.push_back(PerturbModifiedLaplace(entry, epsilon, rng));
  }
  return out;
}

void ValidateStarScale(int d) {
  if (d < 1) throw InvalidParameterError("star scale d must be at least 1");
}

void ValidateCategory(int x, int d) {
  ValidateStarScale(d);
  if (x < 0 || x > d) {
    throw InvalidParameterError("category " + std::to_string(x) +
                                " outside {0.." + std::to_string(d) + "}");
  }
}

std::vector<double> RandomizedResponsePmf(int i, int d,
                                          PrivacyBudget epsilon) {
  ValidateCategory(i, d);
  // Divide through by e^eps so large eps cannot overflow.
  const double damp = std::exp(-epsilon.epsilon());
  const double denominator = 1.0 + d * damp;
  std::vector<double> pmf(d + 1, damp / denominator);
  pmf[i] = 1.0 / denominator;
  return pmf;
}

int PerturbRandomizedResponse(int x, int d, PrivacyBudget epsilon,
                              RandomStream& rng) {
  const std::vector<double> pmf = RandomizedResponsePmf(x, d, epsilon);
  const double u = rng.Uniform01();
  double cumulative = 0.0;
  for (int j = 0; j < d; ++j) {
    cumulative += pmf[j];
    if (u < cumulative) return j;
  }
  return d;
}

std::vector<int> PerturbRandomizedResponse(std::span<const int> x, int d,
                                           PrivacyBudget epsilon,
                                           RandomStream& rng) {
  std::vector<int> out;
  out.reserve(x.size());
  for (int entry : x) {
    out.push_back(PerturbRandomizedResponse(entry, d, epsilon, rng));
  }
  return out;
}

double ModifiedLaplaceSquaredError(PrivacyBudget epsilon) {
  const double scale = 2.0 / epsilon.epsilon();
  return 2.0 * scale * scale;
}

double RandomizedResponseSquaredErrorBound(int d, PrivacyBudget epsilon) {
  ValidateStarScale(d);
  const double spread = static_cast<double>(d - 1);
  const double damp = std::exp(-epsilon.epsilon());
  return spread * spread * d * damp / (1.0 + d * damp);
}

}  // namespace ldp
