#pragma once

#include <deque>
#include <memory>
#include <mutex>

#include "mtforge/gateway/clock.hpp"

namespace mtforge::gateway {

// Sliding-window limiter: at most `per_minute` acquisitions in any 60 s window.
class RateLimiter {
 public:
  RateLimiter(int per_minute, std::shared_ptr<Clock> clock);

  // Blocks (through the clock) until a slot is free, then takes it.
  void acquire();

 private:
  int per_minute_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<Clock::TimePoint> recent_;
};

}  // namespace mtforge::gateway
