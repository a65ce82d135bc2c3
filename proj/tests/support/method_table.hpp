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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "golden.hpp"
#include "scosim/model.hpp"

namespace scosim::testing {

struct MethodTableRow {
  PairingFeatures initiator;
  PairingFeatures responder;
  std::string expected;  // method name or error name
};

// The frozen 100-row decision table in data/golden/method_table.txt.
inline std::vector<MethodTableRow> load_method_table() {
  std::ifstream in(data_path("golden/method_table.txt"));
  if (!in) throw std::runtime_error("missing method table");
  std::vector<MethodTableRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string io_i, io_r;
    int mitm_i = 0, mitm_r = 0;
    MethodTableRow row;
    fields >> io_i >> mitm_i >> io_r >> mitm_r >> row.expected;
    auto a = parse_io_capability(io_i);
    auto b = parse_io_capability(io_r);
    if (!a || !b || row.expected.empty()) {
      throw std::runtime_error("bad method table row: " + line);
    }
    row.initiator = PairingFeatures{*a, mitm_i != 0};
    row.responder = PairingFeatures{*b, mitm_r != 0};
    rows.push_back(row);
  }
  return rows;
}

inline std::string outcome_name(const Result<PairingMethod>& result) {
  return std::string(result.ok() ? to_string(result.value())
                                 : to_string(result.error()));
}

}  // namespace scosim::testing
