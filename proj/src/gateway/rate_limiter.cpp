#include "mtforge/gateway/rate_limiter.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge::gateway {

namespace {
constexpr std::chrono::seconds kWindow{60};
}

RateLimiter::RateLimiter(int per_minute, std::shared_ptr<Clock> clock)
    : per_minute_(per_minute), clock_(std::move(clock)) {
  require(per_minute_ >= 1, ErrorCode::InvalidArgument, "requests_per_minute must be >= 1");
}

void RateLimiter::acquire() {
  for (;;) {
    Clock::Duration wait{};
    {
      std::lock_guard lock(mu_);
      const auto now = clock_->now();
      while (!recent_.empty() && now - recent_.front() >= kWindow) recent_.pop_front();
      if (static_cast<int>(recent_.size()) < per_minute_) {
        recent_.push_back(now);
        return;
      }
      wait = recent_.front() + kWindow - now;
    }
    clock_->sleep_for(wait);
  }
}

}  // namespace mtforge::gateway
