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
 *  Verdict grid: every scenario against the flawed host and the patched
 *  host with no method, Passkey Entry or Numeric Comparison specified.
 *  Runs share nothing, so cells are spread over worker threads.
 *
 ******************************************************************************/

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scosim/scenarios/scenario.hpp"

namespace scosim::scenarios {

struct MatrixColumn {
  host::HostVariant host = host::HostVariant::kFlawed;
  std::optional<PairingMethod> enforce;

  std::string label() const;
};

std::vector<MatrixColumn> matrix_columns();

struct MatrixCell {
  ScenarioId id = ScenarioId::kIrkTheft;
  MatrixColumn column;
  Verdict verdict = Verdict::kAttackFailed;
  std::string reason;
  // The independent validator agreed with the verdict.
  bool validated = false;
};

// Cells are ordered scenario-major. threads == 0 picks the hardware count.
std::vector<MatrixCell> run_matrix(uint64_t seed, unsigned threads = 0);

std::string format_matrix(const std::vector<MatrixCell>& cells);

}  // namespace scosim::scenarios
