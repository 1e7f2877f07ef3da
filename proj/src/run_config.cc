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

#include "ldp/run_config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "ldp/errors.h"

namespace ldp {

namespace {

std::string Trim(const std::string& text) {
  const size_t first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const size_t last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ParseError("bad value '" + text + "' for key '" + key + "'", 0);
  }
  return value;
}

}  // namespace

void RunConfig::Validate() const {
  static_cast<void>(PrivacyBudget{epsilon});
  if (mechanism == Mechanism::kRandomizedResponse && !d) {
    throw InvalidParameterError("rr requires d");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidParameterError("gamma must lie in (0, 1)");
  }
  if (trials < 100) throw InvalidParameterError("trials must be at least 100");
  ToGroundTruthSpec().Validate();
  solver.Validate();
}

GroundTruthSpec RunConfig::ToGroundTruthSpec() const {
  GroundTruthSpec spec;
  spec.m = m;
  spec.n = n;
  spec.r = r;
  spec.p_obs = p_obs;
  spec.rho0 = rho0;
  if (mechanism == Mechanism::kRandomizedResponse) {
    spec.scale = ValueScale::kStars;
    spec.d = d.value_or(0);
  } else {
    spec.scale = ValueScale::kContinuous;
  }
  return spec;
}

std::map<std::string, std::string> ParseKeyFile(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", line_number);
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    const std::string value = Trim(trimmed.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_number);
    if (!values.emplace(key, value).second) {
      throw ParseError("key '" + key + "' repeated", line_number);
    }
  }
  return values;
}

void ApplyKeyValues(const std::map<std::string, std::string>& values,
                    RunConfig& config) {
  for (const auto& [key, value] : values) {
    if (key == "mechanism") {
      try {
        config.mechanism = ParseMechanism(value);
      } catch (const InvalidParameterError& e) {
        throw ParseError(e.what(), 0);
      }
    } else if (key == "epsilon") {
      config.epsilon = ParseNumber<double>(key, value);
    } else if (key == "d") {
      config.d = ParseNumber<int>(key, value);
    } else if (key == "gamma") {
      config.gamma = ParseNumber<double>(key, value);
    } else if (key == "rho0") {
      config.rho0 = ParseNumber<double>(key, value);
    } else if (key == "m") {
      config.m = ParseNumber<int>(key, value);
    } else if (key == "n") {
      config.n = ParseNumber<int>(key, value);
    } else if (key == "r") {
      config.r = ParseNumber<int>(key, value);
    } else if (key == "p_obs") {
      config.p_obs = ParseNumber<double>(key, value);
    } else if (key == "seed") {
      config.seed = ParseNumber<uint64_t>(key, value);
    } else if (key == "trials") {
      config.trials = ParseNumber<int>(key, value);
    } else if (key == "out") {
      config.out = value;
    } else if (key == "max_iterations") {
      config.solver.max_iterations = ParseNumber<int>(key, value);
    } else if (key == "step_tolerance") {
      config.solver.step_tolerance = ParseNumber<double>(key, value);
    } else if (key == "constraint_tolerance") {
      config.solver.constraint_tolerance = ParseNumber<double>(key, value);
    } else if (key == "lambda_bisection_steps") {
      config.solver.lambda_bisection_steps = ParseNumber<int>(key, value);
    } else if (key == "rank_cap") {
      config.solver.rank_cap = ParseNumber<int>(key, value);
    } else {
      throw ParseError("unknown key '" + key + "'", 0);
    }
  }
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  RunConfig config;
  ApplyKeyValues(ParseKeyFile(in), config);
  return config;
}

}  // namespace ldp
