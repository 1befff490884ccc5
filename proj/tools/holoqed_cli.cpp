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

// holoqed: run or validate a gate-simulation scenario.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "holoqed/error.hpp"
#include "holoqed/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSchema = 2;
constexpr int kExitPropagation = 3;

void print_schema_error(const holoqed::scenario::SchemaError& e) {
  std::cerr << "config error";
  if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
  std::cerr << ": " << e.what() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  namespace hs = holoqed::scenario;
  CLI::App app{"Holonomic dressed-state gate simulator (version " + hs::library_version() + ")"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hs::library_version());

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write timeseries.csv and summary.json");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--out-dir", out_dir, "Output directory (default: output.dir from the config)");
  run->add_option("--override", overrides, "Override a config field, e.g. drive.omega_mhz=4")->take_all();
  run->add_flag("--quiet", quiet, "Only print errors");

  auto* validate = app.add_subcommand("validate", "Check a config and print derived quantities");
  validate->add_option("config", config_path, "Scenario config (JSON)")->required();
  validate->add_option("--override", overrides, "Override a config field")->take_all();
  validate->add_flag("--quiet", quiet, "Only print errors and warnings");

  CLI11_PARSE(app, argc, argv);

  hs::Config config;
  try {
    config = hs::load(config_path, overrides);
  } catch (const hs::SchemaError& e) {
    print_schema_error(e);
    return kExitSchema;
  } catch (const holoqed::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  }

  if (validate->parsed()) {
    try {
      const auto v = hs::validate(config);
      for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
      if (!quiet) {
        std::cout << "config ok: " << config_path << " (" << hs::to_string(config.kind) << ")\n";
        std::cout << v.derived.dump(2) << "\n";
        std::cout << v.warnings.size() << " warning(s)\n";
      }
      return kExitOk;
    } catch (const holoqed::Error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitSchema;
    }
  }

  const std::filesystem::path dir = out_dir.empty() ? config.out_dir : std::filesystem::path(out_dir);
  try {
    if (!quiet) {
      for (const auto& w : hs::validate(config).warnings) std::cerr << "warning: " << w << "\n";
      std::cerr << "running " << hs::to_string(config.kind) << " '" << config.id << "' -> " << dir.string() << "\n";
    }
    const auto outcome = hs::run(config, dir);
    if (!quiet) {
      const auto& f = outcome.summary["final_fidelity"];
      if (!f.is_null()) std::cout << "final_fidelity " << f.get<double>() << "\n";
      const auto& t = outcome.summary["gate_time_ns"];
      if (!t.is_null()) std::cout << "gate_time_ns " << t.get<double>() << "\n";
      for (const auto& p : outcome.files) std::cout << "wrote " << p.string() << "\n";
    }
    return kExitOk;
  } catch (const holoqed::PropagationError& e) {
    std::cerr << "propagation failed: " << e.what() << "\n";
    return kExitPropagation;
  } catch (const holoqed::NumericalError& e) {
    std::cerr << "propagation failed: " << e.what() << "\n";
    return kExitPropagation;
  } catch (const holoqed::scenario::SchemaError& e) {
    print_schema_error(e);
    return kExitSchema;
  } catch (const holoqed::ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
