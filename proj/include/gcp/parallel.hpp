#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace gcp {

namespace detail {
inline std::atomic<std::size_t>& thread_override() {
    static std::atomic<std::size_t> value{0};
    return value;
}
} // namespace detail

/// Worker count for row-parallel loops: set_thread_count() if called with a
/// nonzero value, else GCP_NUM_THREADS, else the hardware concurrency.
inline std::size_t thread_count() {
    if (auto forced = detail::thread_override().load(); forced > 0) return forced;
    if (const char* env = std::getenv("GCP_NUM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Pass 0 to fall back to the environment.
inline void set_thread_count(std::size_t count) { detail::thread_override().store(count); }

/// Calls body(i) for i in [0, count) on contiguous chunks. Each index is
/// handled by exactly one thread, so results that depend only on i are
/// identical for every thread count.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace gcp
