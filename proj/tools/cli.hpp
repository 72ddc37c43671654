// Copyright 2026 The gqspi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqspi/angles.hpp"
#include "gqspi/decision_error.hpp"
#include "gqspi/optimizer.hpp"

namespace gqspi::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kNumericError = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw key -> values, from a config file or from flags.
using KeyValues = std::map<std::string, std::vector<std::string>>;

struct RunConfig {
  std::string command;
  std::optional<int> degree;
  std::optional<double> kappa;
  std::vector<Band> bands;  // beta units after resolution
  std::optional<GaussianPrior> prior;
  std::optional<Objective> objective;
  std::uint64_t seed = 0;
  int restarts = 8;
  int max_iters = 1000;
  double tolerance = 1e-7;
  int points = 512;
  std::vector<int> degrees;
  int trials = 20;
  std::vector<double> betas;
  std::vector<double> gammas;
  std::optional<PhaseAngles> angles;
  bool inject_fault = false;
  std::string out;
  std::string format = "csv";
};

/// Reads `key = value` lines. Lines starting with "#@" inside a gqspi
/// artifact are treated as config lines, so any output can be replayed.
/// JSON artifacts are read from their "config" object.
KeyValues read_config_file(const std::string& path);

/// Flags replace file values key by key.
KeyValues merge(const KeyValues& file, const KeyValues& flags);

RunConfig resolve(const std::string& command, const KeyValues& kv);

/// Fully resolved config as it is embedded into artifacts.
KeyValues canonical(const RunConfig& cfg);

/// Angle files: `theta_i = v`, `phi_i = v`, `lambda0 = v`, or JSON with an
/// "angles" object. Throws IoError when unreadable.
PhaseAngles read_angle_file(const std::string& path);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gqspi::cli
