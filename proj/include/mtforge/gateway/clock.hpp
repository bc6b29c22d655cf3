#pragma once

#include <chrono>
#include <memory>
#include <mutex>

namespace mtforge::gateway {

class Clock {
 public:
  using Duration = std::chrono::nanoseconds;
  using TimePoint = std::chrono::time_point<std::chrono::steady_clock, Duration>;

  virtual ~Clock() = default;
  virtual TimePoint now() = 0;
  virtual void sleep_for(Duration d) = 0;
};

class SystemClock : public Clock {
 public:
  TimePoint now() override;
  void sleep_for(Duration d) override;
};

// Time advances only through sleep_for/advance. Used to test retry backoff
// and rate limiting without waiting.
class SimulatedClock : public Clock {
 public:
  TimePoint now() override;
  void sleep_for(Duration d) override;
  void advance(Duration d) { sleep_for(d); }

 private:
  std::mutex mu_;
  TimePoint now_{};
};

std::shared_ptr<Clock> system_clock();

}  // namespace mtforge::gateway
