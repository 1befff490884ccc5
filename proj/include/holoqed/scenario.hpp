// Copyright 2026 The holoqed Authors
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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "holoqed/circuit.hpp"
#include "holoqed/error.hpp"
#include "holoqed/holonomy.hpp"

namespace holoqed::scenario {

inline constexpr int kSchemaVersion = 1;

/// Config violation with the offending field and, when known, its line.
class SchemaError : public ConfigurationError {
 public:
  SchemaError(std::string field, int line, const std::string& message);

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }  // 0 when unknown

 private:
  std::string field_;
  int line_;
};

enum class Kind { SingleGate, SingleAverage, TwoQubitGate, CircuitParams, HolonomyChecks };

std::string to_string(Kind kind);

struct Config {
  Kind kind = Kind::SingleGate;
  std::string id;
  nlohmann::ordered_json resolved;  // every field, defaults filled in

  SingleQubitScenario single;
  TwoQubitScenario two;
  circuit::DeviceSpec device;
  std::vector<double> scaling_factors;  // multiples of E_J0
  std::size_t n_states = 1000;
  AverageMethod method = AverageMethod::Linear;
  unsigned workers = 0;
  std::size_t transport_samples = 200;
  std::size_t random_gates = 1000;
  unsigned long long seed = 7;
  double output_resolution = 0.25;  // ns
  std::filesystem::path out_dir = ".";
};

/// Parses a config document; `overrides` are "dotted.key=value" strings
/// whose value is read as JSON when possible and as text otherwise.
Config parse(const std::string& text, const std::vector<std::string>& overrides = {},
             const std::string& source = "<config>");
Config load(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

struct Validation {
  std::vector<std::string> warnings;
  nlohmann::ordered_json derived;
};

Validation validate(const Config& config);

struct Outcome {
  nlohmann::ordered_json summary;
  std::vector<std::filesystem::path> files;
};

/// Executes the scenario and writes its artifacts into `out_dir`.
Outcome run(const Config& config, const std::filesystem::path& out_dir);

/// Library version string baked in at build time.
std::string library_version();

}  // namespace holoqed::scenario
