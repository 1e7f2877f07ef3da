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

// Command-line front end:
//
//   ldp-ratings privatize  --mechanism {mlaplace|rr} --epsilon E [--d D]
//                          --seed S --in ratings.csv --out private.csv
//   ldp-ratings verify-dp  --mechanism ... --epsilon E [--d D]
//                          [--samples N] [--seed S] --report report.csv
//   ldp-ratings bound      --mechanism ... --epsilon E --gamma G --rho0 R
//                          --s S --m M --n N [--d D]
//   ldp-ratings experiment [--config run.cfg] [--trials T] --out results.csv
//   ldp-ratings recover    --in private.csv --rho R --out estimate.csv
//
// Exit codes: 0 success, 1 certification or coverage failure, 2 usage or
// input error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldp/completion.h"
#include "ldp/dp_verify.h"
#include "ldp/errors.h"
#include "ldp/mechanisms.h"
#include "ldp/ratings_io.h"
#include "ldp/run_config.h"
#include "ldp/utility.h"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorts users and items so the row streams do not depend on input order.
ldp::RatingsTable Canonicalize(const ldp::RatingsTable& table) {
  auto order = [](const std::vector<std::string>& labels) {
    std::vector<size_t> idx(labels.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return labels[a] < labels[b]; });
    return idx;
  };
  const std::vector<size_t> rows = order(table.users);
  const std::vector<size_t> cols = order(table.items);
  ldp::RatingsTable out;
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(cols.size());
  out.matrix.values = ldp::Matrix::Zero(m, n);
  out.matrix.mask = ldp::Mask::Constant(m, n, false);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.users.push_back(table.users[rows[i]]);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == 0) out.items.push_back(table.items[cols[j]]);
      out.matrix.values(i, j) = table.matrix.values(rows[i], cols[j]);
      out.matrix.mask(i, j) = table.matrix.mask(rows[i], cols[j]);
    }
  }
  if (m == 0) {
    for (size_t j : cols) out.items.push_back(table.items[j]);
  }
  return out;
}

struct PrivatizeArgs {
  std::string mechanism;
  double epsilon = 0.0;
  std::optional<int> d;
  uint64_t seed = 0;
  std::string in;
  std::string out;
};

int RunPrivatize(const PrivatizeArgs& args) {
  const ldp::Mechanism mechanism = ldp::ParseMechanism(args.mechanism);
  if (mechanism == ldp::Mechanism::kRandomizedResponse && !args.d) {
    throw UsageError("privatize --mechanism rr requires --d");
  }
  const ldp::PrivacyBudget epsilon(args.epsilon);
  ldp::RatingScale input_scale = ldp::RatingScale::UnitInterval();
  if (args.d) input_scale = ldp::RatingScale::Stars(*args.d);
  ldp::RatingsTable table =
      Canonicalize(ldp::ReadRatings(args.in, input_scale));

  ldp::RatingScale output_scale = ldp::RatingScale::Real();
  if (mechanism == ldp::Mechanism::kModifiedLaplace) {
    if (args.d) {
      const int d = *args.d;
      table.matrix.values = table.matrix.mask.select(
          table.matrix.values.unaryExpr([d](double stars) {
            return ldp::NormalizeStars(static_cast<int>(stars), d);
          }),
          0.0);
    }
  } else {
    output_scale = ldp::RatingScale::Stars(*args.d);
  }
  ldp::RatingsTable result = table;
  result.matrix = ldp::PrivatizeMatrix(table.matrix, mechanism, epsilon,
                                       args.d.value_or(1), args.seed);
  ldp::WriteRatings(args.out, result, output_scale);
  return kExitSuccess;
}

struct VerifyArgs {
  std::string mechanism;
  double epsilon = 0.0;
  std::optional<int> d;
  int64_t samples = ldp::kMinCompositionSamples;
  uint64_t seed = 1;
  std::string report;
};

int RunVerify(const VerifyArgs& args) {
  const ldp::Mechanism mechanism = ldp::ParseMechanism(args.mechanism);
  if (mechanism == ldp::Mechanism::kRandomizedResponse && !args.d) {
    throw UsageError("verify-dp --mechanism rr requires --d");
  }
  if (mechanism == ldp::Mechanism::kModifiedLaplace &&
      args.samples < ldp::kMinCompositionSamples) {
    throw UsageError("--samples must be at least 1000000 for mlaplace");
  }
  const ldp::PrivacyBudget epsilon(args.epsilon);
  ldp::RandomStream rng(args.seed);
  std::vector<ldp::RatioReport> reports;
  if (mechanism == ldp::Mechanism::kRandomizedResponse) {
    reports = ldp::CertifyRandomizedResponseEntry(*args.d, epsilon);
  } else {
    const auto grid = ldp::ModifiedLaplaceGrid();
    const auto partition = ldp::ModifiedLaplacePartition();
    reports = ldp::CertifyModifiedLaplaceEntry(epsilon, grid, partition);
  }
  reports.push_back(ldp::CertifyVectorComposition(
      mechanism, 2, epsilon, rng, args.samples, args.d.value_or(1)));

  std::ofstream out(args.report, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + args.report);
  ldp::WriteRatioReports(out, reports);

  const auto failures = std::count_if(
      reports.begin(), reports.end(),
      [](const ldp::RatioReport& r) { return !r.pass; });
  std::cout << "reports=" << reports.size() << " failures=" << failures
            << " max_entry_ratio=" << ldp::FormatReal(reports.front().ratio)
            << " entry_bound=" << ldp::FormatReal(reports.front().bound)
            << '\n';
  return failures == 0 ? kExitSuccess : kExitFailure;
}

struct BoundArgs {
  std::string mechanism;
  ldp::UtilityBoundInputs inputs;
  std::optional<int> d;
};

int RunBound(BoundArgs args) {
  const ldp::Mechanism mechanism = ldp::ParseMechanism(args.mechanism);
  if (mechanism == ldp::Mechanism::kRandomizedResponse) {
    if (!args.d) throw UsageError("bound --mechanism rr requires --d");
    args.inputs.d = *args.d;
  }
  std::cout << ldp::FormatReal(ldp::Bound(mechanism, args.inputs)) << '\n';
  return kExitSuccess;
}

struct ExperimentArgs {
  std::string config;
  std::optional<int> trials;
  std::string out;
  std::optional<std::string> mechanism;
  std::optional<double> epsilon;
  std::optional<int> d;
  std::optional<double> gamma;
  std::optional<double> rho0;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<int> r;
  std::optional<double> p_obs;
  std::optional<uint64_t> seed;
};

int RunExperiment(const ExperimentArgs& args) {
  ldp::RunConfig config;
  if (!args.config.empty()) config = ldp::LoadRunConfig(args.config);
  if (args.mechanism) config.mechanism = ldp::ParseMechanism(*args.mechanism);
  if (args.epsilon) config.epsilon = *args.epsilon;
  if (args.d) config.d = *args.d;
  if (args.gamma) config.gamma = *args.gamma;
  if (args.rho0) config.rho0 = *args.rho0;
  if (args.m) config.m = *args.m;
  if (args.n) config.n = *args.n;
  if (args.r) config.r = *args.r;
  if (args.p_obs) config.p_obs = *args.p_obs;
  if (args.seed) config.seed = *args.seed;
  if (args.trials) config.trials = *args.trials;
  if (!args.out.empty()) config.out = args.out;
  if (config.mechanism == ldp::Mechanism::kRandomizedResponse && !config.d) {
    throw UsageError("experiment with mechanism rr requires d");
  }
  if (config.out.empty()) throw UsageError("experiment requires --out");
  config.Validate();

  const ldp::CoverageSummary summary = ldp::CoverageEstimate(
      config.ToGroundTruthSpec(), config.mechanism,
      ldp::PrivacyBudget(config.epsilon), config.gamma, config.trials,
      config.seed, config.solver);

  std::ofstream out(config.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + config.out);
  out << "trial,seed,mechanism,epsilon,s,rho,bound,within_bound,"
         "recovery_error,converged\n";
  for (const ldp::TrialRecord& t : summary.trials) {
    out << t.trial << ',' << t.seed << ',' << ldp::MechanismName(t.mechanism)
        << ',' << ldp::FormatReal(t.epsilon) << ',' << t.s << ','
        << ldp::FormatReal(t.rho) << ',' << ldp::FormatReal(t.bound) << ','
        << (t.within_bound ? "true" : "false") << ','
        << ldp::FormatReal(t.recovery_error) << ','
        << (t.converged ? "true" : "false") << '\n';
  }
  for (uint64_t seed : summary.violations) {
    std::cerr << "bound violated: seed=" << seed << '\n';
  }
  std::cout << "coverage=" << ldp::FormatReal(summary.coverage) << '\n';
  return summary.coverage >= 1.0 - config.gamma ? kExitSuccess : kExitFailure;
}

struct RecoverArgs {
  std::string in;
  double rho = 0.0;
  std::string out;
  ldp::SolverConfig solver;
};

int RunRecover(const RecoverArgs& args) {
  const ldp::RatingsTable table =
      ldp::ReadRatings(args.in, ldp::RatingScale::Real());
  if (table.matrix.observed_count() == 0) {
    throw UsageError("recover: input has no ratings");
  }
  const ldp::CompletionResult fit =
      ldp::SolveCompletion(table.matrix, args.rho, args.solver);
  ldp::WriteDenseGrid(args.out, table.users, table.items, fit.estimate);
  std::cout << "nuclear_norm=" << ldp::FormatReal(fit.nuclear_norm)
            << " residual=" << ldp::FormatReal(fit.constraint_residual)
            << " iterations=" << fit.iterations
            << " converged=" << (fit.converged ? "true" : "false") << '\n';
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local differential privacy for rating vectors"};
  app.require_subcommand(1);

  PrivatizeArgs privatize;
  auto* privatize_cmd =
      app.add_subcommand("privatize", "Privatize a ratings file per user");
  privatize_cmd->add_option("--mechanism", privatize.mechanism)
      ->required()
      ->check(CLI::IsMember({"mlaplace", "rr"}));
  privatize_cmd->add_option("--epsilon", privatize.epsilon)->required();
  privatize_cmd->add_option("--d", privatize.d,
                            "Star levels (rr; for mlaplace, input is stars)");
  privatize_cmd->add_option("--seed", privatize.seed)->required();
  privatize_cmd->add_option("--in", privatize.in)->required();
  privatize_cmd->add_option("--out", privatize.out)->required();

  VerifyArgs verify;
  auto* verify_cmd =
      app.add_subcommand("verify-dp", "Certify the privacy guarantee");
  verify_cmd->add_option("--mechanism", verify.mechanism)
      ->required()
      ->check(CLI::IsMember({"mlaplace", "rr"}));
  verify_cmd->add_option("--epsilon", verify.epsilon)->required();
  verify_cmd->add_option("--d", verify.d);
  verify_cmd->add_option("--samples", verify.samples);
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--report", verify.report)->required();

  BoundArgs bound;
  auto* bound_cmd =
      app.add_subcommand("bound", "Print the upper bound on rho");
  bound_cmd->add_option("--mechanism", bound.mechanism)
      ->required()
      ->check(CLI::IsMember({"mlaplace", "rr"}));
  bound_cmd->add_option("--epsilon", bound.inputs.epsilon)->required();
  bound_cmd->add_option("--gamma", bound.inputs.gamma)->required();
  bound_cmd->add_option("--rho0", bound.inputs.rho0)->required();
  bound_cmd->add_option("--s", bound.inputs.s)->required();
  bound_cmd->add_option("--m", bound.inputs.m)->required();
  bound_cmd->add_option("--n", bound.inputs.n)->required();
  bound_cmd->add_option("--d", bound.d);

  ExperimentArgs experiment;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Monte Carlo coverage of the bound");
  experiment_cmd->add_option("--config", experiment.config,
                             "key = value file; flags override its entries")
      ->check(CLI::ExistingFile);
  experiment_cmd->add_option("--trials", experiment.trials);
  experiment_cmd->add_option("--out", experiment.out);
  experiment_cmd->add_option("--mechanism", experiment.mechanism)
      ->check(CLI::IsMember({"mlaplace", "rr"}));
  experiment_cmd->add_option("--epsilon", experiment.epsilon);
  experiment_cmd->add_option("--d", experiment.d);
  experiment_cmd->add_option("--gamma", experiment.gamma);
  experiment_cmd->add_option("--rho0", experiment.rho0);
  experiment_cmd->add_option("--m", experiment.m);
  experiment_cmd->add_option("--n", experiment.n);
  experiment_cmd->add_option("--r", experiment.r);
  experiment_cmd->add_option("--p-obs", experiment.p_obs);
  experiment_cmd->add_option("--seed", experiment.seed);

  RecoverArgs recover;
  auto* recover_cmd =
      app.add_subcommand("recover", "Complete a privatized ratings file");
  recover_cmd->add_option("--in", recover.in)->required();
  recover_cmd->add_option("--rho", recover.rho)->required();
  recover_cmd->add_option("--out", recover.out)->required();
  recover_cmd->add_option("--max-iterations", recover.solver.max_iterations);
  recover_cmd->add_option("--step-tolerance", recover.solver.step_tolerance);
  recover_cmd->add_option("--constraint-tolerance",
                          recover.solver.constraint_tolerance);
  recover_cmd->add_option("--bisection-steps",
                          recover.solver.lambda_bisection_steps);
  recover_cmd->add_option("--rank-cap", recover.solver.rank_cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (privatize_cmd->parsed()) return RunPrivatize(privatize);
    if (verify_cmd->parsed()) return RunVerify(verify);
    if (bound_cmd->parsed()) return RunBound(bound);
    if (experiment_cmd->parsed()) return RunExperiment(experiment);
    if (recover_cmd->parsed()) return RunRecover(recover);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
  } catch (const ldp::InvalidParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
  } catch (const ldp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}
