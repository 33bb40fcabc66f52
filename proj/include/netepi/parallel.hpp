#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace netepi {

/// Calls body(i) for every i in [0, count) on up to `threads` workers. Work
/// items are claimed dynamically; the first exception is rethrown after all
/// workers finish.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
    const auto workers = static_cast<std::size_t>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

inline unsigned default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace netepi
