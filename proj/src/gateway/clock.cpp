#include "mtforge/gateway/clock.hpp"

#include <thread>

namespace mtforge::gateway {

Clock::TimePoint SystemClock::now() {
  return std::chrono::time_point_cast<Duration>(std::chrono::steady_clock::now());
}

void SystemClock::sleep_for(Duration d) {
  if (d > Duration::zero()) std::this_thread::sleep_for(d);
}

Clock::TimePoint SimulatedClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void SimulatedClock::sleep_for(Duration d) {
  std::lock_guard lock(mu_);
  if (d > Duration::zero()) now_ += d;
}

std::shared_ptr<Clock> system_clock() {
  static const auto kClock = std::make_shared<SystemClock>();
  return kClock;
}

}  // namespace mtforge::gateway
