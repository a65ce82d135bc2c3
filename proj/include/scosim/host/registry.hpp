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

/******************************************************************************
 *
 *  Per-app pairing method registry. Persisted as plain text, one
 *  "<app id> = <method>" line per app; '#' starts a comment.
 *
 ******************************************************************************/

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scosim/model.hpp"

namespace scosim::host {

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PairingRegistry {
 public:
  PairingRegistry() = default;

  // Throws RegistryError on malformed lines.
  static PairingRegistry parse(std::string_view text);
  std::string to_text() const;

  // Missing file gives an empty registry.
  static PairingRegistry load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  void specify(const AppId& app, PairingMethod method);
  std::optional<PairingMethod> specified(const AppId& app) const;

  // Strongest method specified by any of the apps; ties go to Numeric
  // Comparison. nullopt when none of them specified anything.
  std::optional<PairingMethod> required(const std::set<AppId>& apps) const;

  const std::map<AppId, PairingMethod>& entries() const { return entries_; }

 private:
  std::map<AppId, PairingMethod> entries_;
};

// Total order used to pick between specified methods.
bool stronger(PairingMethod a, PairingMethod b);

}  // namespace scosim::host
