#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mmfield::detail {

inline int thread_count() {
    if (const char* env = std::getenv("MMFIELD_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(begin, end) over a static partition of [0, n). Chunk boundaries
// depend only on n and the thread count, so per-chunk results are
// reproducible for a fixed MMFIELD_THREADS.
template <class F>
void parallel_chunks(std::size_t n, F&& fn) {
    std::size_t t = std::min<std::size_t>(thread_count(), n ? n : 1);
    if (t <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t b = i * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        threads.emplace_back([&, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mmfield::detail
