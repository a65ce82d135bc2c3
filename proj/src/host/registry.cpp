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

#include "scosim/host/registry.hpp"

#include <fstream>
#include <sstream>

namespace scosim::host {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

bool stronger(PairingMethod a, PairingMethod b) {
  if (strength(a) != strength(b)) return strength(a) > strength(b);
  return a == PairingMethod::kNumericComparison &&
         b != PairingMethod::kNumericComparison;
}

PairingRegistry PairingRegistry::parse(std::string_view text) {
  PairingRegistry out;
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw RegistryError("line " + std::to_string(line_no) + ": missing '='");
    }
    const std::string_view app = trim(line.substr(0, eq));
    const std::string_view method_text = trim(line.substr(eq + 1));
    auto method = parse_pairing_method(method_text);
    if (app.empty() || !method) {
      throw RegistryError("line " + std::to_string(line_no) +
                          ": expected <app> = <method>");
    }
    out.entries_[std::string(app)] = *method;
  }
  return out;
}

std::string PairingRegistry::to_text() const {
  std::string out = "# app id = specified pairing method\n";
  for (const auto& [app, method] : entries_) {
    out += app + " = " + std::string(to_string(method)) + "\n";
  }
  return out;
}

PairingRegistry PairingRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void PairingRegistry::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw RegistryError("cannot write " + path.string());
  out << to_text();
}

void PairingRegistry::specify(const AppId& app, PairingMethod method) {
  entries_[app] = method;
}

std::optional<PairingMethod> PairingRegistry::specified(
    const AppId& app) const {
  auto it = entries_.find(app);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<PairingMethod> PairingRegistry::required(
    const std::set<AppId>& apps) const {
  std::optional<PairingMethod> best;
  for (const auto& app : apps) {
    auto m = specified(app);
    if (m && (!best || stronger(*m, *best))) best = m;
  }
  return best;
}

}  // namespace scosim::host
