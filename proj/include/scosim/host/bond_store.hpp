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

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "scosim/model.hpp"

namespace scosim::host {

enum class OwnerRemoval : uint8_t {
  // The app's ownership was dropped; the bond may survive other owners.
  kRemoved,
  kNotOwner,
  kUnknownBond,
};

// Bonds keyed by peer identity. Every bond keeps refcount equal to the
// number of owning apps.
class BondStore {
 public:
  const Bond* find(const DeviceAddress& identity) const;
  // Public addresses match directly; RPAs resolve under stored peer IRKs.
  const Bond* find_by_address(const DeviceAddress& on_air) const;

  // Inserts or replaces. Owners of a replaced bond are kept.
  void put(Bond bond);
  void add_owner(const DeviceAddress& identity, const AppId& app);
  OwnerRemoval remove_owner(const DeviceAddress& identity, const AppId& app);
  bool erase(const DeviceAddress& identity);
  void clear() { bonds_.clear(); }

  std::vector<Bond> all() const;
  size_t size() const { return bonds_.size(); }
  bool consistent() const;

 private:
  std::map<DeviceAddress, Bond> bonds_;
};

}  // namespace scosim::host
