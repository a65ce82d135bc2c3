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

#include "scosim/scenarios/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "scosim/scenarios/validator.hpp"

namespace scosim::scenarios {

std::string MatrixColumn::label() const {
  std::string out(host::to_string(host));
  out += "/";
  out += enforce ? std::string(to_string(*enforce)) : "-";
  return out;
}

std::vector<MatrixColumn> matrix_columns() {
  return {
      {host::HostVariant::kFlawed, std::nullopt},
      {host::HostVariant::kPatched, std::nullopt},
      {host::HostVariant::kPatched, PairingMethod::kPasskeyEntry},
      {host::HostVariant::kPatched, PairingMethod::kNumericComparison},
  };
}

std::vector<MatrixCell> run_matrix(uint64_t seed, unsigned threads) {
  std::vector<MatrixCell> cells;
  for (ScenarioId id : kAllScenarios) {
    for (const MatrixColumn& column : matrix_columns()) {
      MatrixCell cell;
      cell.id = id;
      cell.column = column;
      cells.push_back(cell);
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, cells.size());

  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned index) {
    try {
      for (size_t i = next++; i < cells.size(); i = next++) {
        MatrixCell& cell = cells[i];
        ScenarioConfig config;
        config.id = cell.id;
        config.host = cell.column.host;
        config.enforce = cell.column.enforce;
        config.seed = seed;
        const ScenarioReport report = run(config);
        cell.verdict = report.verdict;
        cell.reason = report.reason;
        cell.validated = validate(report).ok();
      }
    } catch (...) {
      errors[index] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return cells;
}

std::string format_matrix(const std::vector<MatrixCell>& cells) {
  const auto columns = matrix_columns();
  std::ostringstream out;
  out << std::left << std::setw(28) << "scenario";
  for (const auto& c : columns) out << std::setw(34) << c.label();
  out << "\n";
  for (ScenarioId id : kAllScenarios) {
    out << std::setw(28) << to_string(id);
    for (const auto& c : columns) {
      auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& x) {
        return x.id == id && x.column.host == c.host &&
               x.column.enforce == c.enforce;
      });
      std::string text = it == cells.end() ? "?" : std::string(to_string(it->verdict));
      if (it != cells.end() && !it->validated) text += " (INVALID)";
      out << std::setw(34) << text;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace scosim::scenarios
