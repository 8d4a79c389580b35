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

#ifndef MAQV_CLOCK_H_
#define MAQV_CLOCK_H_

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace maqv {

// Time source used for rate limiting, retries and snapshot timestamps.
class Clock {
 public:
  using Duration = std::chrono::duration<double>;

  virtual ~Clock() = default;

  // Monotonic time in seconds since an arbitrary origin.
  virtual double Now() = 0;
  virtual void SleepFor(Duration d) = 0;
  // Wall-clock time as ISO-8601 UTC ("2025-05-01T12:00:00Z").
  virtual std::string UtcTimestamp() = 0;
};

class SystemClock final : public Clock {
 public:
  double Now() override;
  void SleepFor(Duration d) override;
  std::string UtcTimestamp() override;
};

// Deterministic clock for tests: sleeping advances time instantly and every
// sleep is recorded.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(double start = 0.0, long long epoch_seconds = 1746100800)
      : now_(start), epoch_(epoch_seconds) {}

  double Now() override;
  void SleepFor(Duration d) override;
  std::string UtcTimestamp() override;

  void Advance(double seconds);
  const std::vector<double>& sleeps() const { return sleeps_; }

 private:
  std::mutex mu_;
  double now_;
  long long epoch_;
  std::vector<double> sleeps_;
};

// Enforces a minimum gap between consecutive Acquire() calls. Thread-safe;
// concurrent callers are serialized.
class RateLimiter {
 public:
  RateLimiter(Clock& clock, double min_gap_seconds)
      : clock_(clock), min_gap_(min_gap_seconds) {}

  void Acquire();
  double min_gap() const { return min_gap_; }

 private:
  Clock& clock_;
  double min_gap_;
  std::mutex mu_;
  std::optional<double> last_;
};

std::string FormatUtc(long long epoch_seconds);

}  // namespace maqv

#endif  // MAQV_CLOCK_H_
