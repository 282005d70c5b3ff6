#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace chiralis {

// CHIRALIS_THREADS caps the worker count; default: hardware concurrency
inline int worker_count() {
    int hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* s = std::getenv("CHIRALIS_THREADS")) {
        int v = std::atoi(s);
        if (v > 0) return std::min(v, hw * 4);
    }
    return hw;
}

// body(i) for i in [0, n); results must go to per-index slots
inline void parallel_for(size_t n, const std::function<void(size_t)>& body, int threads = worker_count()) {
    threads = static_cast<int>(std::min<size_t>(std::max(1, threads), std::max<size_t>(n, 1)));
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (size_t i; (i = next++) < n;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace chiralis
