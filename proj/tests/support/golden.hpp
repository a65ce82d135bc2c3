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
#include <map>
#include <stdexcept>
#include <string>

namespace scosim::testing {

inline std::string data_path(const std::string& relative) {
  return std::string(SCOSIM_DATA_DIR) + "/" + relative;
}

// Reads a "key = value" fixture. Lines starting with '#' are comments.
inline std::map<std::string, std::string> load_key_values(
    const std::string& relative) {
  std::ifstream in(data_path(relative));
  if (!in) throw std::runtime_error("missing fixture " + relative);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace scosim::testing
