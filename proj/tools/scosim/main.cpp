/******************************************************************************
 *
 *  Copyright 2026 The scosim Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at:
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 *
 ******************************************************************************/

// Command-line front end: run one scenario, print the verdict grid, run the
// advertising race, list scenarios or check a saved report.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scosim/att/profile.hpp"
#include "scosim/link/race.hpp"
#include "scosim/scenarios/matrix.hpp"
#include "scosim/scenarios/scenario.hpp"
#include "scosim/scenarios/validator.hpp"

namespace {

using namespace scosim;
using namespace scosim::scenarios;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

template <typename T, size_t N, typename Name>
std::optional<T> parse_loose(const std::array<T, N>& all, std::string_view text,
                             Name name) {
  for (const T& v : all) {
    if (lower(name(v)) == lower(text)) return v;
  }
  return std::nullopt;
}

ScenarioConfig make_config(const std::string& id, const std::string& host,
                           const std::string& enforce,
                           const std::string& profile, uint64_t seed) {
  ScenarioConfig config;
  auto parsed_id = parse_loose(kAllScenarios, id,
                               [](ScenarioId s) { return to_string(s); });
  if (!parsed_id) throw ConfigError("unknown scenario " + id);
  config.id = *parsed_id;
  auto variant = host::parse_host_variant(lower(host));
  if (!variant) throw ConfigError("unknown host " + host);
  config.host = *variant;
  if (!enforce.empty() && lower(enforce) != "none") {
    auto method = parse_loose(kAllPairingMethods, enforce,
                              [](PairingMethod m) { return to_string(m); });
    if (!method) throw ConfigError("unknown pairing method " + enforce);
    config.enforce = *method;
  }
  if (!profile.empty()) {
    if (std::filesystem::is_regular_file(profile)) {
      try {
        config.device = peripherals::load_device_profile(profile);
      } catch (const att::ProfileError& e) {
        throw ConfigError(profile + ": " + e.what());
      }
    } else {
      config.profile = profile;
    }
  }
  config.seed = seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BLE pairing attack simulator"};
  app.require_subcommand(1);

  std::string id;
  std::string host = "flawed";
  std::string enforce;
  std::string profile;
  std::string format = "text";
  uint64_t seed = 1;
  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  run_cmd->add_option("scenario", id, "scenario id (see list)")->required();
  run_cmd->add_option("--host", host, "flawed or patched");
  run_cmd->add_option("--enforce", enforce,
                      "method the app specifies (patched host only)");
  run_cmd->add_option("--profile", profile,
                      "bundled profile name or profile file");
  run_cmd->add_option("--seed", seed, "simulation seed");
  run_cmd->add_option("--format", format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));

  uint64_t matrix_seed = 1;
  unsigned threads = 0;
  auto* matrix_cmd = app.add_subcommand("matrix", "scenario x host grid");
  matrix_cmd->add_option("--seed", matrix_seed, "simulation seed");
  matrix_cmd->add_option("--threads", threads, "worker threads, 0 = all");

  double victim_hz = link::kCalibratedVictimHz;
  double fake_hz = link::kMaxAdvertisingHz;
  int trials = 500;
  uint64_t race_seed = 1;
  auto* race_cmd = app.add_subcommand("race", "advertising race experiment");
  race_cmd->add_option("--victim-freq", victim_hz, "victim advertising Hz")
      ->check(CLI::Range(1.0, link::kMaxAdvertisingHz));
  race_cmd->add_option("--fake-freq", fake_hz, "clone advertising Hz")
      ->check(CLI::Range(1.0, link::kMaxAdvertisingHz));
  race_cmd->add_option("--trials", trials, "connection attempts")
      ->check(CLI::PositiveNumber);
  race_cmd->add_option("--seed", race_seed, "simulation seed");

  auto* list_cmd = app.add_subcommand("list", "list scenario ids");

  std::string report_path;
  auto* validate_cmd =
      app.add_subcommand("validate", "re-check a structured report");
  validate_cmd->add_option("report", report_path, "report file, - for stdin")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ScenarioReport report =
          run(make_config(id, host, enforce, profile, seed));
      std::cout << (format == "structured" ? report.to_structured()
                                           : report.to_text());
    } else if (*matrix_cmd) {
      std::cout << format_matrix(run_matrix(matrix_seed, threads));
    } else if (*race_cmd) {
      const auto result = link::race(victim_hz, fake_hz, trials, race_seed);
      std::printf("victim %.1f Hz, clone %.1f Hz: clone won %d of %d (%.3f)\n",
                  victim_hz, fake_hz, result.fake_wins, result.trials,
                  result.rate());
    } else if (*list_cmd) {
      for (ScenarioId s : kAllScenarios) {
        std::printf("%-28s %s\n", std::string(to_string(s)).c_str(),
                    std::string(describe(s)).c_str());
      }
    } else if (*validate_cmd) {
      std::stringstream text;
      if (report_path == "-") {
        text << std::cin.rdbuf();
      } else {
        std::ifstream in(report_path);
        if (!in) throw ConfigError("cannot open " + report_path);
        text << in.rdbuf();
      }
      const Validation v = validate(ScenarioReport::parse(text.str()));
      if (v.ok()) {
        std::cout << "report consistent\n";
      } else {
        for (const auto& p : v.problems) std::cout << "problem: " << p << "\n";
        return 1;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
