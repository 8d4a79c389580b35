// Copyright 2026 The MAQV Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maqv/clock.h"

#include <cmath>
#include <ctime>
#include <thread>

namespace maqv {

std::string FormatUtc(long long epoch_seconds) {
  std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double SystemClock::Now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void SystemClock::SleepFor(Duration d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

std::string SystemClock::UtcTimestamp() {
  using namespace std::chrono;
  return FormatUtc(
      duration_cast<seconds>(system_clock::now().time_since_epoch()).count());
}

double ManualClock::Now() {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::SleepFor(Duration d) {
  std::lock_guard lock(mu_);
  sleeps_.push_back(d.count());
  if (d.count() > 0) now_ += d.count();
}

std::string ManualClock::UtcTimestamp() {
  std::lock_guard lock(mu_);
  return FormatUtc(epoch_ + static_cast<long long>(std::floor(now_)));
}

void ManualClock::Advance(double seconds) {
  std::lock_guard lock(mu_);
  now_ += seconds;
}

void RateLimiter::Acquire() {
  std::lock_guard lock(mu_);
  if (last_) {
    const double wait = *last_ + min_gap_ - clock_.Now();
    if (wait > 0) clock_.SleepFor(Clock::Duration(wait));
  }
  last_ = clock_.Now();
}

}  // namespace maqv
