#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lhvprobe {

/// Run body(i) for i in [0, count) on `workers` threads. Work items are
/// claimed through an atomic counter; callers own any per-index output
/// slots, so results never depend on scheduling. The first exception is
/// rethrown on the calling thread after all workers join.
inline void parallel_for(long count, int workers,
                         const std::function<void(long)>& body) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = static_cast<int>(std::min<long>(workers, count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lhvprobe
