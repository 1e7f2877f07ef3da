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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ldp/errors.h"

namespace ldp {

namespace {

void CheckSameShape(const Matrix& a, Eigen::Index rows, Eigen::Index cols) {
  if (a.rows() != rows || a.cols() != cols) {
    throw InvalidParameterError("matrix shape mismatch");
  }
}

Eigen::VectorXd SingularValues(const Matrix& a) {
  if (!a.allFinite()) throw InvalidParameterError("matrix has non-finite entries");
  if (a.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

double MaskedNorm(const Matrix& a, const Mask& mask) {
  return mask.select(a, 0.0).norm();
}

// Singular value soft-thresholding: argmin_M 1/2||M - w||^2 + lambda||M||_*.
Matrix Shrink(const Matrix& w, double lambda, int rank_cap, double& nuclear) {
  Eigen::BDCSVD<Matrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < sigma.size() && keep < rank_cap && sigma(keep) > lambda) {
    ++keep;
  }
  nuclear = 0.0;
  if (keep == 0) return Matrix::Zero(w.rows(), w.cols());
  const Eigen::VectorXd shrunk = sigma.head(keep).array() - lambda;
  nuclear = shrunk.sum();
  return svd.matrixU().leftCols(keep) * shrunk.asDiagonal() *
         svd.matrixV().leftCols(keep).transpose();
}

struct Iterate {
  Matrix m;
  double residual = 0.0;
  double nuclear = 0.0;
  int iterations = 0;
  bool converged = false;
  double lambda = 0.0;
};

// Accelerated proximal gradient with gradient-based momentum restart.
Iterate SolvePenalized(const Matrix& pz, const Mask& mask, double lambda,
                       const Matrix& warm, const SolverConfig& config) {
  Iterate out;
  out.lambda = lambda;
  Matrix x = warm;
  Matrix y = warm;
  double t = 1.0;
  double nuclear = 0.0;
  for (int k = 0; k < config.max_iterations; ++k) {
    // y - P(y - Z) keeps y off the mask and Z on it.
    const Matrix w = mask.select(pz, y);
    Matrix next = Shrink(w, lambda, config.rank_cap, nuclear);
    ++out.iterations;
    const double step = (next - x).norm();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if ((y - next).cwiseProduct(next - x).sum() > 0.0) {
      t = 1.0;
      y = next;
    } else {
      y = next + ((t - 1.0) / t_next) * (next - x);
      t = t_next;
    }
    const double scale = std::max(1.0, x.norm());
    x = std::move(next);
    if (step <= config.step_tolerance * scale) {
      out.converged = true;
      break;
    }
  }
  out.m = std::move(x);
  out.nuclear = nuclear;
  out.residual = MaskedNorm(out.m - pz, mask);
  return out;
}

// Moves M toward Z on the mask until the residual equals rho.
Iterate Repair(const Iterate& source, const Matrix& pz, const Mask& mask,
               double rho) {
  Iterate out = source;
  if (source.residual > rho) {
    const double t = 1.0 - rho / source.residual;
    out.m = source.m + t * mask.select(pz - source.m, 0.0);
    out.residual = MaskedNorm(out.m - pz, mask);
    out.nuclear = NuclearNorm(out.m);
  }
  return out;
}

}  // namespace

void SolverConfig::Validate() const {
  if (max_iterations < 1 || lambda_bisection_steps < 1 || rank_cap < 1 ||
      !(step_tolerance > 0.0) || !(constraint_tolerance > 0.0) ||
      !(constraint_tolerance < 1.0)) {
    throw InvalidParameterError("solver settings must be positive");
  }
}

RatingMatrix Project(const Matrix& a, const Mask& mask) {
  CheckSameShape(a, mask.rows(), mask.cols());
  return RatingMatrix{mask.select(a, 0.0), mask};
}

double ComputeRho(const Matrix& theta, const RatingMatrix& z) {
  CheckSameShape(theta, z.rows(), z.cols());
  CheckSameShape(z.values, z.mask.rows(), z.mask.cols());
  return MaskedNorm(theta - z.values, z.mask);
}

double RipAlphaEstimate(const Mask& mask, double p, int rank, int trials,
                        RandomStream& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidParameterError("p must be in (0, 1]");
  if (trials < 1) throw InvalidParameterError("trials must be at least 1");
  if (rank < 1) throw InvalidParameterError("rank must be at least 1");
  const Eigen::Index m = mask.rows(), n = mask.cols();
  double alpha = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Matrix g(m, rank), h(n, rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) g(i, j) = rng.StandardNormal();
      for (Eigen::Index i = 0; i < n; ++i) h(i, j) = rng.StandardNormal();
    }
    const Matrix a = g * h.transpose();
    const double total = a.squaredNorm();
    if (total == 0.0) continue;
    const double kept = mask.select(a, 0.0).squaredNorm();
    alpha = std::max(alpha, std::abs(kept / (p * total) - 1.0));
  }
  return alpha;
}

double NuclearNorm(const Matrix& a) {
  const Eigen::VectorXd sigma = SingularValues(a);
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0.0;
  const double cutoff = kSingularValueCutoff * sigma(0);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < sigma.size() && sigma(k) > cutoff; ++k) {
    sum += sigma(k);
  }
  return sum;
}

int NumericalRank(const Matrix& a) {
  const Eigen::VectorXd sigma = SingularValues(a);
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double cutoff = kSingularValueCutoff * sigma(0);
  return static_cast<int>((sigma.array() > cutoff).count());
}

CompletionResult SolveCompletion(const RatingMatrix& z, double rho,
                                 const SolverConfig& config) {
  config.Validate();
  CheckSameShape(z.values, z.mask.rows(), z.mask.cols());
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw InvalidParameterError("rho must be non-negative and finite");
  }
  if (z.observed_count() == 0) {
    throw InvalidParameterError("no observed entries to complete from");
  }
  const Mask& mask = z.mask;
  const Matrix pz = mask.select(z.values, 0.0);
  const Eigen::Index rows = pz.rows(), cols = pz.cols();

  CompletionResult result;
  const double pz_norm = pz.norm();
  const double sigma_max = SingularValues(pz)(0);
  if (rho >= pz_norm) {
    result.estimate = Matrix::Zero(rows, cols);
    result.constraint_residual = pz_norm;
    result.converged = true;
    result.lambda = sigma_max;
    return result;
  }

  int total_iterations = 0;
  auto finish = [&](const Iterate& chosen) {
    result.estimate = chosen.m;
    result.nuclear_norm = NuclearNorm(chosen.m);
    result.constraint_residual = chosen.residual;
    result.iterations = total_iterations;
    result.converged =
        chosen.converged &&
        chosen.residual <= rho * (1.0 + config.constraint_tolerance);
    result.lambda = chosen.lambda;
    return result;
  };

  Matrix warm = Matrix::Zero(rows, cols);

  if (rho == 0.0) {
    // Equality on the mask: follow the lambda path down, then impose the
    // observed entries exactly.
    Iterate current;
    for (double lambda = 0.5 * sigma_max;
         lambda >= sigma_max * kSingularValueCutoff; lambda *= 0.25) {
      current = SolvePenalized(pz, mask, lambda, warm, config);
      total_iterations += current.iterations;
      warm = current.m;
    }
    current.m = mask.select(pz, current.m);
    current.residual = MaskedNorm(current.m - pz, mask);
    return finish(current);
  }

  const double band_lo = rho * (1.0 - config.constraint_tolerance);
  const double band_hi = rho * (1.0 + config.constraint_tolerance);
  std::optional<Iterate> best;
  auto consider = [&](const Iterate& it) {
    const Iterate candidate = it.residual <= band_hi ? it : Repair(it, pz, mask, rho);
    if (!best || candidate.nuclear < best->nuclear) best = candidate;
  };

  // Halve lambda from the point where M = 0 becomes optimal until the
  // residual drops under the band.
  double lambda_hi = sigma_max;
  double lambda = 0.5 * sigma_max;
  std::optional<Iterate> feasible;
  while (lambda >= sigma_max * 1e-14) {
    Iterate it = SolvePenalized(pz, mask, lambda, warm, config);
    total_iterations += it.iterations;
    warm = it.m;
    consider(it);
    if (it.residual <= band_hi) {
      feasible = std::move(it);
      break;
    }
    lambda_hi = lambda;
    lambda *= 0.5;
  }
  if (!feasible) return finish(*best);

  double lambda_lo = feasible->lambda;
  bool in_band = feasible->residual >= band_lo;
  for (int step = 0; step < config.lambda_bisection_steps && !in_band; ++step) {
    const double mid = std::sqrt(lambda_lo * lambda_hi);
    Iterate it = SolvePenalized(pz, mask, mid, warm, config);
    total_iterations += it.iterations;
    warm = it.m;
    consider(it);
    if (it.residual > band_hi) {
      lambda_hi = mid;
    } else {
      lambda_lo = mid;
      in_band = it.residual >= band_lo;
    }
  }
  return finish(*best);
}

double EstimationError(const Matrix& estimate, const Matrix& theta) {
  CheckSameShape(estimate, theta.rows(), theta.cols());
  return (estimate - theta).norm();
}

}  // namespace ldp
