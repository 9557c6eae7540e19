#pragma once

// Per-thread evaluation diagnostics and process-wide allocation accounting.
//
// The allocation counters only move when an executable installs the
// replacement operator new from linexp/alloc_hook.hpp; otherwise they stay
// at zero and PeakScope reports zero.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace linexp {

/// Raised when a runtime bound on an intermediate value is violated.
class bound_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace instrument {

struct Counters {
    std::size_t depth = 0;
    std::size_t max_depth = 0;
    std::uint64_t horner_bound_checks = 0;   // |h_i| < 2 in the block scheme
    std::uint64_t product_bound_checks = 0;  // |h_i| < 2^(i-1) in the product scheme
};

inline Counters& counters() {
    thread_local Counters c;
    return c;
}

inline void reset() { counters() = Counters{}; }

/// Tracks binary-splitting recursion depth for the current thread.
class DepthGuard {
public:
    DepthGuard() {
        auto& c = counters();
        ++c.depth;
        if (c.depth > c.max_depth) {
            c.max_depth = c.depth;
        }
    }
    ~DepthGuard() { --counters().depth; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;
};

}  // namespace instrument

namespace memory {

struct AllocationStats {
    std::atomic<std::int64_t> live{0};
    std::atomic<std::int64_t> peak{0};
    std::atomic<std::uint64_t> allocations{0};
    std::atomic<bool> hooked{false};
};

inline AllocationStats& stats() {
    static AllocationStats s;
    return s;
}

inline void on_allocate(std::size_t bytes) noexcept {
    auto& s = stats();
    const std::int64_t now = s.live.fetch_add(static_cast<std::int64_t>(bytes), std::memory_order_relaxed) +
                             static_cast<std::int64_t>(bytes);
    s.allocations.fetch_add(1, std::memory_order_relaxed);
    std::int64_t prev = s.peak.load(std::memory_order_relaxed);
    while (now > prev && !s.peak.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
}

inline void on_deallocate(std::size_t bytes) noexcept {
    stats().live.fetch_sub(static_cast<std::int64_t>(bytes), std::memory_order_relaxed);
}

inline bool hook_installed() noexcept { return stats().hooked.load(); }

/// Measures the peak of live heap bytes above the level at construction.
class PeakScope {
public:
    PeakScope() : baseline_(stats().live.load()) { stats().peak.store(baseline_); }

    [[nodiscard]] std::size_t peak_bytes() const {
        const std::int64_t p = stats().peak.load() - baseline_;
        return p > 0 ? static_cast<std::size_t>(p) : 0;
    }

private:
    std::int64_t baseline_;
};

}  // namespace memory
}  // namespace linexp
