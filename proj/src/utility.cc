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

#include "ldp/utility.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ldp/errors.h"
#include "ldp/ratings_io.h"

namespace ldp {

void UtilityBoundInputs::Validate() const {
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) {
    throw InvalidParameterError("rho0 must be non-negative and finite");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidParameterError("gamma must lie in (0, 1)");
  }
  if (m < 1 || n < 1) throw InvalidParameterError("m and n must be positive");
  if (s < 0 || s > m * n) throw InvalidParameterError("s must lie in [0, mn]");
  if (d < 1) throw InvalidParameterError("d must be at least 1");
  static_cast<void>(PrivacyBudget{epsilon});
}

double BoundModifiedLaplace(const UtilityBoundInputs& in) {
  in.Validate();
  const double s = static_cast<double>(in.s);
  const double mn = static_cast<double>(in.m) * static_cast<double>(in.n);
  const double eps = in.epsilon;
  const double fabricated =
      2.0 * mn / ((std::exp(0.5 * eps) + 1.0) * in.gamma) *
      (1.0 + 8.0 / (eps * eps));
  return in.rho0 * std::sqrt(s) + (4.0 / eps) * std::sqrt(s / in.gamma) +
         std::sqrt(fabricated);
}

double BoundRandomizedResponse(const UtilityBoundInputs& in) {
  in.Validate();
  const double s = static_cast<double>(in.s);
  const double mn = static_cast<double>(in.m) * static_cast<double>(in.n);
  const double d = in.d;
  // 1 / (e^eps + d) written as e^-eps / (1 + d e^-eps).
  const double damp = std::exp(-in.epsilon);
  const double flip = damp / (1.0 + d * damp);
  return in.rho0 * std::sqrt(s) +
         2.0 * (d - 1.0) * std::sqrt(2.0 * mn * d * flip / in.gamma);
}

double Bound(Mechanism mechanism, const UtilityBoundInputs& inputs) {
  return mechanism == Mechanism::kModifiedLaplace
             ? BoundModifiedLaplace(inputs)
             : BoundRandomizedResponse(inputs);
}

void GroundTruthSpec::Validate() const {
  if (m < 1 || n < 1) throw InvalidParameterError("m and n must be positive");
  if (r < 1 || 2 * r > std::min(m, n)) {
    throw InvalidParameterError("rank r must satisfy 1 <= 2r <= min(m, n)");
  }
  if (scale == ValueScale::kStars && d < 1) {
    throw InvalidParameterError("star scale needs d >= 1");
  }
  if (!(p_obs > 0.0 && p_obs <= 1.0)) {
    throw InvalidParameterError("p_obs must lie in (0, 1]");
  }
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) {
    throw InvalidParameterError("rho0 must be non-negative and finite");
  }
}

Matrix LowRankFromFactors(const Matrix& u, const Matrix& v) {
  if (u.cols() != v.cols()) {
    throw InvalidParameterError("factor ranks differ");
  }
  Matrix theta = u * v.transpose();
  const double largest = theta.cwiseAbs().maxCoeff();
  if (largest > 0.0) theta /= largest;
  return theta;
}

Matrix GenerateGroundTruth(const GroundTruthSpec& spec, RandomStream& rng) {
  spec.Validate();
  Matrix u(spec.m, spec.r), v(spec.n, spec.r);
  for (int i = 0; i < spec.m; ++i) {
    for (int k = 0; k < spec.r; ++k) u(i, k) = rng.UniformRange(-1.0, 1.0);
  }
  for (int j = 0; j < spec.n; ++j) {
    for (int k = 0; k < spec.r; ++k) v(j, k) = rng.UniformRange(-1.0, 1.0);
  }
  Matrix theta = LowRankFromFactors(u, v);
  if (spec.scale == ValueScale::kStars) {
    // A one-level scale has a single rating; nothing to round.
    if (spec.d == 1) return Matrix::Ones(spec.m, spec.n);
    theta = theta.unaryExpr(
        [&](double x) { return double(DenormalizeStars(x, spec.d)); });
  }
  return theta;
}

RatingMatrix Observe(const Matrix& theta, const GroundTruthSpec& spec,
                     RandomStream& rng) {
  spec.Validate();
  if (theta.rows() != spec.m || theta.cols() != spec.n) {
    throw InvalidParameterError("theta shape does not match the spec");
  }
  RatingMatrix x{Matrix::Zero(spec.m, spec.n), Mask::Constant(spec.m, spec.n, false)};
  for (int i = 0; i < spec.m; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      // Both draws are taken for every cell so the stream position does
      // not depend on the mask.
      const bool observed = rng.Bernoulli(spec.p_obs);
      const double noise = rng.UniformRange(-spec.rho0, spec.rho0);
      if (!observed) continue;
      x.mask(i, j) = true;
      if (spec.scale == ValueScale::kContinuous) {
        x.values(i, j) = std::clamp(theta(i, j) + noise, -1.0, 1.0);
      } else {
        x.values(i, j) = std::clamp(theta(i, j) + std::trunc(noise), 1.0,
                                    static_cast<double>(spec.d));
      }
    }
  }
  return x;
}

RatingMatrix PrivatizeMatrix(const RatingMatrix& x, Mechanism mechanism,
                             PrivacyBudget epsilon, int d, uint64_t seed) {
  const Eigen::Index m = x.rows(), n = x.cols();
  if (x.mask.rows() != m || x.mask.cols() != n) {
    throw InvalidParameterError("mask shape mismatch");
  }
  RatingMatrix z{Matrix::Zero(m, n), Mask::Constant(m, n, false)};
  if (mechanism == Mechanism::kModifiedLaplace) {
    std::vector<ContinuousRating> row(n, ContinuousRating::Missing());
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!x.mask(i, j)) {
          row[j] = ContinuousRating::Missing();
          continue;
        }
        const double value = x.values(i, j);
        if (!(value >= -1.0 && value <= 1.0)) {
          throw InvalidParameterError(
              "modified Laplace needs ratings normalized into [-1, 1]");
        }
        row[j] = ContinuousRating::Observed(value);
      }
      RandomStream rng = RandomStream::ForSubstream(seed, i);
      const std::vector<PerturbedRating> out =
          PerturbModifiedLaplace(row, epsilon, rng);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (out[j].is_missing()) continue;
        z.mask(i, j) = true;
        z.values(i, j) = out[j].value();
      }
    }
    return z;
  }

  ValidateStarScale(d);
  std::vector<int> row(n, kMissingStars);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!x.mask(i, j)) {
        row[j] = kMissingStars;
        continue;
      }
      const double value = x.values(i, j);
      if (value != std::round(value) || value < 1.0 || value > d) {
        throw InvalidParameterError(
            "randomized response needs integer star ratings in 1..d");
      }
      row[j] = static_cast<int>(value);
    }
    RandomStream rng = RandomStream::ForSubstream(seed, i);
    const std::vector<int> out = PerturbRandomizedResponse(row, d, epsilon, rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (out[j] == kMissingStars) continue;
      z.mask(i, j) = true;
      z.values(i, j) = out[j];
    }
  }
  return z;
}

namespace {

void CheckMechanismScale(const GroundTruthSpec& spec, Mechanism mechanism) {
  const bool stars = spec.scale == ValueScale::kStars;
  if (stars != (mechanism == Mechanism::kRandomizedResponse)) {
    throw InvalidParameterError(
        "mlaplace needs the continuous scale and rr the star scale");
  }
}

}  // namespace

PipelineSample SimulatePipeline(const GroundTruthSpec& spec,
                                Mechanism mechanism, PrivacyBudget epsilon,
                                uint64_t seed) {
  CheckMechanismScale(spec, mechanism);
  PipelineSample sample;
  RandomStream truth_rng = RandomStream::ForSubstream(seed, 0);
  sample.theta = GenerateGroundTruth(spec, truth_rng);
  RandomStream observe_rng = RandomStream::ForSubstream(seed, 1);
  sample.x = Observe(sample.theta, spec, observe_rng);
  sample.z = PrivatizeMatrix(sample.x, mechanism, epsilon, spec.d,
                             DeriveSeed(seed, 2));
  return sample;
}

RhoDecomposition DecomposeRho(const Matrix& theta, const RatingMatrix& x,
                              const RatingMatrix& z) {
  if (theta.rows() != x.rows() || theta.cols() != x.cols() ||
      theta.rows() != z.rows() || theta.cols() != z.cols()) {
    throw InvalidParameterError("matrix shape mismatch");
  }
  const Mask kept = x.mask.array() && z.mask.array();
  const Mask fabricated = z.mask.array() && !x.mask.array();
  RhoDecomposition out;
  out.rho = ComputeRho(theta, z);
  out.intrinsic = kept.select(theta - x.values, 0.0).norm();
  out.mechanism = kept.select(x.values - z.values, 0.0).norm();
  out.fabricated = fabricated.select(theta - z.values, 0.0).norm();
  out.kept_count = kept.count();
  out.fabricated_count = fabricated.count();
  return out;
}

SolverConfig ExperimentSolverConfig() {
  SolverConfig config;
  config.max_iterations = 300;
  config.step_tolerance = 1e-6;
  config.lambda_bisection_steps = 30;
  return config;
}

TrialRecord RunTrial(const GroundTruthSpec& spec, Mechanism mechanism,
                     PrivacyBudget epsilon, double gamma, uint64_t seed,
                     const SolverConfig& config) {
  const PipelineSample sample = SimulatePipeline(spec, mechanism, epsilon, seed);
  TrialRecord record;
  record.seed = seed;
  record.mechanism = mechanism;
  record.epsilon = epsilon.epsilon();
  record.s = sample.x.observed_count();
  record.rho = ComputeRho(sample.theta, sample.z);
  record.rank = spec.r;
  record.observed_fraction = static_cast<double>(sample.z.observed_count()) /
                             (static_cast<double>(spec.m) * spec.n);

  UtilityBoundInputs inputs;
  inputs.rho0 = spec.rho0;
  inputs.s = record.s;
  inputs.epsilon = epsilon.epsilon();
  inputs.gamma = gamma;
  inputs.m = spec.m;
  inputs.n = spec.n;
  inputs.d = mechanism == Mechanism::kRandomizedResponse ? spec.d : 1;
  record.bound = Bound(mechanism, inputs);
  record.within_bound = record.rho <= record.bound;

  if (sample.z.observed_count() == 0) {
    record.recovery_error = sample.theta.norm();
    record.converged = false;
    return record;
  }
  const CompletionResult fit = SolveCompletion(sample.z, record.rho, config);
  record.recovery_error = EstimationError(fit.estimate, sample.theta);
  record.converged = fit.converged;
  return record;
}

CoverageSummary CoverageEstimate(const GroundTruthSpec& spec,
                                 Mechanism mechanism, PrivacyBudget epsilon,
                                 double gamma, int trials, uint64_t base_seed,
                                 const SolverConfig& config) {
  if (trials < 100) throw InvalidParameterError("coverage needs >= 100 trials");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidParameterError("gamma must lie in (0, 1)");
  }
  CheckMechanismScale(spec, mechanism);
  spec.Validate();
  config.Validate();

  CoverageSummary summary;
  summary.trials.resize(trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        TrialRecord record =
            RunTrial(spec, mechanism, epsilon, gamma, base_seed + t, config);
        record.trial = t;
        summary.trials[t] = record;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers =
      std::clamp(std::thread::hardware_concurrency(), 1u, 16u);
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (std::thread& thread : threads) thread.join();
  if (failure) std::rethrow_exception(failure);

  int covered = 0;
  for (const TrialRecord& record : summary.trials) {
    if (record.within_bound) {
      ++covered;
    } else {
      summary.violations.push_back(record.seed);
    }
  }
  summary.coverage = static_cast<double>(covered) / trials;
  return summary;
}

}  // namespace ldp
