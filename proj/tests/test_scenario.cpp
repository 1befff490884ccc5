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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "holoqed/scenario.hpp"

namespace fs = std::filesystem;
namespace hs = holoqed::scenario;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kMinimalSingle = R"({
  "schema_version": 1,
  "kind": "single_gate",
  "id": "probe",
  "drive": { "gate": "not" }
})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("holoqed_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text) n += ch == '\n';
  return n;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HOLOQED_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("unknown field reports name and line") {
    const std::string text = "{\n  \"schema_version\": 1,\n  \"kind\": \"single_gate\",\n  \"physics\": {\n"
                             "    \"omega_c_mhz\": 6000,\n    \"gee_mhz\": 300\n  }\n}\n";
    try {
      hs::parse(text);
      FAIL("expected a schema error");
    } catch (const hs::SchemaError& e) {
      CHECK(e.field() == "physics.gee_mhz");
      CHECK(e.line() == 6);
    }
  }

  TEST_CASE("negative rate names the field") {
    const std::string text = R"({"schema_version": 1, "kind": "single_gate", "physics": {"kappa_mhz": -0.01}})";
    try {
      hs::parse(text);
      FAIL("expected a schema error");
    } catch (const hs::SchemaError& e) {
      CHECK(e.field() == "physics.kappa_mhz");
      CHECK(std::string(e.what()).find("kappa_mhz") != std::string::npos);
    }
  }

  TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(hs::parse("{ not json"), hs::SchemaError);
    CHECK_THROWS_AS(hs::parse(R"({"schema_version": 2, "kind": "single_gate"})"), hs::SchemaError);
    CHECK_THROWS_AS(hs::parse(R"({"schema_version": 1, "kind": "teleport"})"), hs::SchemaError);
    CHECK_THROWS_AS(hs::parse(R"({"schema_version": 1, "kind": "single_gate", "physics": {"fock_cutoff": 1}})"),
                    hs::SchemaError);
    CHECK_THROWS_AS(hs::parse(R"({"schema_version": 1, "kind": "single_gate", "physics": {"fock_cutoff": "five"}})"),
                    hs::SchemaError);
  }

  TEST_CASE("equal tone amplitudes give theta pi over two") {
    const std::string text = R"({"schema_version": 1, "kind": "single_gate",
      "drive": {"gate": "custom", "omega1_mhz": 5.0, "omega2_mhz": 5.0}})";
    const auto c = hs::parse(text);
    CHECK(c.single.theta == doctest::Approx(kPi / 2).epsilon(1e-15));
    const auto v = hs::validate(c);
    CHECK(v.derived["theta_rad"].get<double>() == doctest::Approx(kPi / 2));
    CHECK(v.derived["theta_over_pi"].get<double>() == doctest::Approx(0.5));
  }

  TEST_CASE("shipped configs validate without warnings") {
    for (const char* name : {"hadamard", "not", "hadamard_average", "not_average", "two_qubit", "circuit_params",
                             "holonomy_checks"}) {
      CAPTURE(name);
      const auto c = hs::load(fs::path(HOLOQED_CONFIG_DIR) / (std::string(name) + ".json"));
      CHECK(hs::validate(c).warnings.empty());
    }
  }

  TEST_CASE("defaults match the reference operating point") {
    const auto c = hs::parse(kMinimalSingle);
    CHECK(c.single.omega_c == doctest::Approx(holoqed::mhz_to_angular(6000.0)));
    CHECK(c.single.g0 == doctest::Approx(holoqed::mhz_to_angular(300.0)));
    CHECK(c.single.omega == doctest::Approx(holoqed::mhz_to_angular(8.0)));
    CHECK(c.single.kappa == doctest::Approx(holoqed::mhz_to_angular(0.01)));
    CHECK(c.single.anharmonicity == doctest::Approx(holoqed::mhz_to_angular(310.0)));
    CHECK(c.single.fock_cutoff == 5);
    CHECK(c.single.transmon_levels == 3);
    const auto two = hs::parse(R"({"schema_version": 1, "kind": "two_qubit_gate"})");
    CHECK(two.two.t13 == doctest::Approx(holoqed::mhz_to_angular(6.0)));
  }

  TEST_CASE("large drive triggers a warning") {
    const auto c = hs::parse(kMinimalSingle, {"drive.omega_mhz=40"});
    CHECK(c.single.omega == doctest::Approx(holoqed::mhz_to_angular(40.0)));
    CHECK_FALSE(hs::validate(c).warnings.empty());
  }

  TEST_CASE("overrides") {
    const auto c = hs::parse(kMinimalSingle, {"physics.fock_cutoff=3", "physics.decoherence=false", "id=renamed"});
    CHECK(c.single.fock_cutoff == 3);
    CHECK_FALSE(c.single.decoherence);
    CHECK(c.id == "renamed");
    CHECK(c.resolved["physics"]["fock_cutoff"] == 3);
    CHECK_THROWS_AS(hs::parse(kMinimalSingle, {"physics.nothing=3"}), hs::SchemaError);
    CHECK_THROWS_AS(hs::parse(kMinimalSingle, {"no_equals_sign"}), hs::SchemaError);
  }

  TEST_CASE("zero duration gives one row") {
    const auto c = hs::parse(kMinimalSingle, {"numerics.duration_ns=0", "initial.theta_prime_rad=0.4"});
    const auto dir = scratch("zero");
    const auto out = hs::run(c, dir);
    const auto csv = read_file(dir / "timeseries.csv");
    CHECK(count_lines(csv) == 2);
    CHECK(csv.rfind("t_ns,pop_G,pop_minus,pop_plus,leakage,fidelity\n", 0) == 0);
    // NOT maps cos|G> + sin|-> to sin|G> + cos|->
    const double expected = std::pow(2.0 * std::sin(0.4) * std::cos(0.4), 2);
    CHECK(out.summary["final_fidelity"].get<double>() == doctest::Approx(expected).epsilon(1e-10));
  }

  TEST_CASE("row count and summary determinism") {
    const auto c = hs::parse(kMinimalSingle, {"physics.transmon_levels=2", "physics.fock_cutoff=3",
                                              "numerics.output_resolution_ns=0.7"});
    const auto d1 = scratch("det1");
    const auto d2 = scratch("det2");
    hs::run(c, d1);
    hs::run(c, d2);
    const auto csv = read_file(d1 / "timeseries.csv");
    CHECK(count_lines(csv) == std::size_t(std::floor(62.5 / 0.7)) + 1 + 1);
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    double last = -1.0;
    while (std::getline(rows, line)) {
      const double t = std::stod(line.substr(0, line.find(',')));
      CHECK(t >= last);
      last = t;
    }
    auto s1 = nlohmann::ordered_json::parse(read_file(d1 / "summary.json"));
    auto s2 = nlohmann::ordered_json::parse(read_file(d2 / "summary.json"));
    CHECK(s1.contains("generated_at"));
    s1.erase("generated_at");
    s2.erase("generated_at");
    CHECK(s1.dump() == s2.dump());
    CHECK(s1["library_version"] == hs::library_version());
    CHECK(s1["scenario_angular"]["physics"].contains("g0_rad_per_ns"));
  }

  TEST_CASE("two-qubit csv header") {
    const auto c = hs::parse(R"({"schema_version": 1, "kind": "two_qubit_gate"})", {"numerics.duration_ns=0"});
    const auto dir = scratch("two");
    hs::run(c, dir);
    const auto csv = read_file(dir / "timeseries.csv");
    CHECK(csv.rfind("t_ns,pop_G_1,", 0) == 0);
    CHECK(csv.find(",fidelity\n") != std::string::npos);
  }

  TEST_CASE("circuit report") {
    const auto c = hs::load(fs::path(HOLOQED_CONFIG_DIR) / "circuit_params.json");
    const auto dir = scratch("circuit");
    const auto out = hs::run(c, dir);
    const auto text = read_file(dir / "report.txt");
    CHECK(text.find("55.6") != std::string::npos);
    CHECK(fs::exists(dir / "scaling.csv"));
  }

  TEST_CASE("cli exit codes") {
    const auto dir = scratch("cli");
    {
      std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "kind": "single_gate", "physics": {"kappa_mhz": -1}})";
      std::ofstream(dir / "ok.json") << kMinimalSingle;
    }
    CHECK(run_cli("validate " + (dir / "ok.json").string()) == 0);
    CHECK(run_cli("validate " + (dir / "bad.json").string()) == 2);
    CHECK(run_cli("run " + (dir / "bad.json").string()) == 2);
    CHECK(run_cli("run " + (dir / "ok.json").string() + " --quiet --out-dir " + (dir / "ok").string() +
                  " --override physics.transmon_levels=2 --override physics.fock_cutoff=2") == 0);
    CHECK(fs::exists(dir / "ok" / "summary.json"));
    CHECK(run_cli("run " + (dir / "ok.json").string() + " --quiet --out-dir " + (dir / "drift").string() +
                  " --override numerics.max_trace_drift=1e-300") == 3);
    CHECK(run_cli("run " + (dir / "missing.json").string()) != 0);
  }
}
