#ifndef MLAB_PARALLEL_HPP
#define MLAB_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mlab {

// process-wide default used when a caller passes 0 ("pick for me"); the CLI
// sets it from --threads so nested Monte Carlo loops follow one knob. Thread
// count never changes numeric results, only wall time.
inline std::atomic<int>& default_thread_count() {
    static std::atomic<int> value{0};
    return value;
}

inline void set_default_threads(int threads) { default_thread_count().store(threads); }

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    int configured = default_thread_count().load();
    if (configured > 0) return configured;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n_tasks) on a pool of worker threads. Tasks are
// claimed from a shared counter; callers own determinism by indexing results
// with i, never by completion order.
inline void parallel_for(std::int64_t n_tasks, int threads, const std::function<void(std::int64_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n_tasks <= 1) {
        for (std::int64_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= n_tasks) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int n_workers = static_cast<int>(std::min<std::int64_t>(threads, n_tasks));
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace mlab

#endif
