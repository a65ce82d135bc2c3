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
 *  Independent re-check of a scenario report. The success predicate of each
 *  scenario is evaluated again from the report alone (stolen artifacts,
 *  ground-truth facts and the embedded sniffer log), without touching the
 *  simulation, and compared with the recorded verdict.
 *
 ******************************************************************************/

#pragma once

#include <string>
#include <vector>

#include "scosim/scenarios/scenario.hpp"

namespace scosim::scenarios {

struct Validation {
  bool predicate_holds = false;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

Validation validate(const ScenarioReport& report);

}  // namespace scosim::scenarios
