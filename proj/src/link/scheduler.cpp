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

#include "scosim/link/scheduler.hpp"

#include <stdexcept>

namespace scosim::link {

Scheduler::TaskId Scheduler::schedule(Time delay, std::function<void()> task) {
  const Key key{now_ + delay, next_sequence_++};
  queue_.emplace(key, std::move(task));
  keys_.emplace(key.sequence, key);
  return key.sequence;
}

void Scheduler::cancel(TaskId id) {
  auto it = keys_.find(id);
  if (it == keys_.end()) return;
  queue_.erase(it->second);
  keys_.erase(it);
}

bool Scheduler::run_one() {
  if (queue_.empty()) return false;
  auto node = queue_.extract(queue_.begin());
  keys_.erase(node.key().sequence);
  now_ = node.key().due;
  ++executed_;
  node.mapped()();
  for (const auto& check : invariants_) check();
  return true;
}

void Scheduler::run(uint64_t max_events) {
  for (uint64_t n = 0; run_one(); ++n) {
    if (n >= max_events) {
      throw std::runtime_error("scheduler did not quiesce");
    }
  }
}

void Scheduler::run_until(Time deadline) {
  while (!queue_.empty() && queue_.begin()->first.due <= deadline) {
    run_one();
  }
  if (deadline > now_) now_ = deadline;
}

void Scheduler::add_invariant(std::function<void()> check) {
  invariants_.push_back(std::move(check));
}

}  // namespace scosim::link
