#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>

namespace modlie {

struct ResourceLimits {
    std::uint64_t memory_bytes = std::uint64_t(8) << 30;
    /// Wall-clock ceiling; zero or negative means unlimited.
    double seconds = 0.0;
};

/// Shared between worker threads; `check` throws ResourceLimitExceeded once a
/// ceiling is crossed and keeps throwing on every later call.
class ResourceGuard {
  public:
    explicit ResourceGuard(ResourceLimits limits = {});

    void check();
    double elapsed_seconds() const;
    const ResourceLimits& limits() const noexcept { return limits_; }
    bool tripped() const noexcept { return tripped_.load(); }

  private:
    ResourceLimits limits_;
    std::chrono::steady_clock::time_point start_;
    std::atomic<bool> tripped_{false};
    std::atomic<std::uint64_t> calls_{0};
};

/// Resident set size of this process in bytes (0 where unavailable).
std::uint64_t current_rss_bytes();
/// High-water mark of the resident set size in bytes (0 where unavailable).
std::uint64_t peak_rss_bytes();

}  // namespace modlie
