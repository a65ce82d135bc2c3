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

#include "scosim/link/race.hpp"

#include <stdexcept>

#include "scosim/link/medium.hpp"

namespace scosim::link {

namespace {

class Advertiser : public LinkAgent {
 public:
  explicit Advertiser(std::string label) : label_(std::move(label)) {}
  std::string label() const override { return label_; }

 private:
  std::string label_;
};

}  // namespace

RaceResult race(double victim_hz, double fake_hz, int trials, uint64_t seed) {
  if (trials < 0) throw std::invalid_argument("negative trial count");
  Scheduler scheduler(seed);
  Medium medium(scheduler);
  Advertiser victim("victim"), fake("fake"), scanner("scanner");
  const DeviceId v = medium.attach(victim);
  const DeviceId f = medium.attach(fake);
  const DeviceId s = medium.attach(scanner);
  const auto shared = DeviceAddress::public_identity(0x0000'5EED'CAFE);
  const auto own = DeviceAddress::public_identity(0x0000'0000'0001);
  medium.advertise(v, {shared, "keyboard", {}, victim_hz});
  medium.advertise(f, {shared, "keyboard", {}, fake_hz});

  RaceResult result;
  for (int t = 0; t < trials; ++t) {
    std::optional<ConnectResult> outcome;
    medium.connect(s, own, shared,
                   [&outcome](const ConnectResult& r) { outcome = r; });
    scheduler.run();
    if (!outcome || !outcome->connection) {
      throw std::logic_error("race trial did not connect");
    }
    ++result.trials;
    if (outcome->peer == f) ++result.fake_wins;
    medium.disconnect(*outcome->connection, DisconnectReason::kLocalHost);
    scheduler.run();
  }
  return result;
}

double analytic_race_rate(double victim_hz, double fake_hz) {
  if (fake_hz >= victim_hz) return 1.0 - victim_hz / (2.0 * fake_hz);
  return fake_hz / (2.0 * victim_hz);
}

Calibration calibrate_victim_frequency(int trials, uint64_t seed) {
  Calibration best;
  double best_error = 0.0;
  for (int hz = 10; hz <= 50; ++hz) {
    const double r30 = race(hz, 30.0, trials, seed).rate();
    const double r50 = race(hz, 50.0, trials, seed).rate();
    const double error = (r30 - kReferenceRateAt30Hz) *
                             (r30 - kReferenceRateAt30Hz) +
                         (r50 - kReferenceRateAt50Hz) *
                             (r50 - kReferenceRateAt50Hz);
    if (best.victim_hz == 0.0 || error < best_error) {
      best = {static_cast<double>(hz), r30, r50};
      best_error = error;
    }
  }
  return best;
}

}  // namespace scosim::link
