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

#ifndef LDP_RUN_CONFIG_H_
#define LDP_RUN_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "ldp/completion.h"
#include "ldp/mechanisms.h"
#include "ldp/utility.h"

namespace ldp {

// Settings of one experiment run. Loaded from a flat `key = value` file;
// command-line flags then override individual keys.
struct RunConfig {
  Mechanism mechanism = Mechanism::kModifiedLaplace;
  double epsilon = 1.0;
  // Required for rr; ignored by mlaplace.
  std::optional<int> d;
  double gamma = 0.1;
  double rho0 = 0.05;
  int m = 50;
  int n = 50;
  int r = 2;
  double p_obs = 0.5;
  uint64_t seed = 1;
  int trials = 200;
  SolverConfig solver = ExperimentSolverConfig();
  std::string out;

  // Cross-field checks; throws InvalidParameterError.
  void Validate() const;
  GroundTruthSpec ToGroundTruthSpec() const;
};

// Raw key/value pairs. Blank lines and lines starting with '#' are skipped.
// Throws ParseError on lines without '=' or repeated keys.
std::map<std::string, std::string> ParseKeyFile(std::istream& in);

// Applies recognized keys onto `config`. Unknown keys and malformed values
// throw ParseError.
void ApplyKeyValues(const std::map<std::string, std::string>& values,
                    RunConfig& config);

RunConfig LoadRunConfig(const std::string& path);

}  // namespace ldp

#endif  // LDP_RUN_CONFIG_H_
