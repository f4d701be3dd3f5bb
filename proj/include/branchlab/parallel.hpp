#pragma once

// Share-nothing index-range fan-out. Each index owns its output slot, so the
// merged result does not depend on the worker count or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace branchlab {

inline unsigned default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Calls f(i) for every i in [0, count). Work is handed out in fixed-size
// chunks from a shared cursor; the first exception is rethrown after join.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& f, std::size_t chunk = 64) {
    if (count == 0) return;
    workers = std::max(1u, workers);
    if (workers == 1 || count <= chunk) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t lo = cursor.fetch_add(chunk);
            if (lo >= count) return;
            const std::size_t hi = std::min(count, lo + chunk);
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                cursor.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, (count + chunk - 1) / chunk));
    pool.reserve(spawn);
    for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace branchlab
