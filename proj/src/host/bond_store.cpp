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

#include "scosim/host/bond_store.hpp"

#include "scosim/crypto.hpp"

namespace scosim::host {

const Bond* BondStore::find(const DeviceAddress& identity) const {
  auto it = bonds_.find(identity);
  return it == bonds_.end() ? nullptr : &it->second;
}

const Bond* BondStore::find_by_address(const DeviceAddress& on_air) const {
  if (!on_air.is_rpa()) return find(on_air);
  for (const auto& [identity, bond] : bonds_) {
    if (bond.peer_irk && crypto::rpa_resolve(*bond.peer_irk, on_air)) {
      return &bond;
    }
  }
  return nullptr;
}

void BondStore::put(Bond bond) {
  if (auto it = bonds_.find(bond.peer_identity); it != bonds_.end()) {
    bond.owner_apps.insert(it->second.owner_apps.begin(),
                           it->second.owner_apps.end());
  }
  bond.refcount = static_cast<uint32_t>(bond.owner_apps.size());
  bonds_[bond.peer_identity] = std::move(bond);
}

void BondStore::add_owner(const DeviceAddress& identity, const AppId& app) {
  auto it = bonds_.find(identity);
  if (it == bonds_.end()) return;
  it->second.owner_apps.insert(app);
  it->second.refcount = static_cast<uint32_t>(it->second.owner_apps.size());
}

OwnerRemoval BondStore::remove_owner(const DeviceAddress& identity,
                                     const AppId& app) {
  auto it = bonds_.find(identity);
  if (it == bonds_.end()) return OwnerRemoval::kUnknownBond;
  if (it->second.owner_apps.erase(app) == 0) return OwnerRemoval::kNotOwner;
  it->second.refcount = static_cast<uint32_t>(it->second.owner_apps.size());
  if (it->second.refcount == 0) bonds_.erase(it);
  return OwnerRemoval::kRemoved;
}

bool BondStore::erase(const DeviceAddress& identity) {
  return bonds_.erase(identity) > 0;
}

std::vector<Bond> BondStore::all() const {
  std::vector<Bond> out;
  for (const auto& [identity, bond] : bonds_) out.push_back(bond);
  return out;
}

bool BondStore::consistent() const {
  for (const auto& [identity, bond] : bonds_) {
    if (bond.refcount != bond.owner_apps.size()) return false;
    if (bond.peer_identity != identity) return false;
  }
  return true;
}

}  // namespace scosim::host
