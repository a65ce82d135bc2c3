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
 *  Single-threaded discrete event scheduler. Time is in microseconds. Tasks
 *  due at the same instant run in the order they were scheduled, which
 *  together with the owned Rng makes every run a pure function of the seed.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scosim/rng.hpp"

namespace scosim::link {

using Time = uint64_t;

inline constexpr Time kMillisecond = 1'000;
inline constexpr Time kSecond = 1'000'000;

class Scheduler {
 public:
  using TaskId = uint64_t;

  explicit Scheduler(uint64_t seed) : rng_(seed) {}

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  Time now() const { return now_; }
  Rng& rng() { return rng_; }

  TaskId schedule(Time delay, std::function<void()> task);
  // No-op for tasks that already ran or were cancelled.
  void cancel(TaskId id);

  // Runs the next task. Returns false when the queue is empty.
  bool run_one();
  // Runs until the queue drains. Throws std::runtime_error after
  // max_events tasks to catch runaway periodic tasks.
  void run(uint64_t max_events = 10'000'000);
  // Runs every task due at or before `deadline`, then sets the clock to it.
  void run_until(Time deadline);
  void run_for(Time duration) { run_until(now_ + duration); }

  size_t pending() const { return queue_.size(); }
  uint64_t executed() const { return executed_; }

  // Checked after every task; a check throws to report a violation.
  void add_invariant(std::function<void()> check);

 private:
  struct Key {
    Time due;
    uint64_t sequence;
    auto operator<=>(const Key&) const = default;
  };

  Rng rng_;
  Time now_ = 0;
  uint64_t next_sequence_ = 0;
  uint64_t executed_ = 0;
  std::map<Key, std::function<void()>> queue_;
  std::map<TaskId, Key> keys_;
  std::vector<std::function<void()>> invariants_;
};

}  // namespace scosim::link
