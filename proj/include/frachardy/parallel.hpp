#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace frachardy {

/// Global cap on worker threads (CLI --threads / FRAC_HARDY_THREADS).
/// 0 means "use hardware concurrency".
inline unsigned& thread_cap() {
    static unsigned cap = 0;
    return cap;
}

inline unsigned effective_threads(std::size_t njobs) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned cap = thread_cap();
    if (cap == 0) {
        if (const char* env = std::getenv("FRAC_HARDY_THREADS"))
            cap = static_cast<unsigned>(std::max(1, std::atoi(env)));
        else
            cap = hw;
    }
    return std::min<unsigned>(std::min(cap, hw), static_cast<unsigned>(std::max<std::size_t>(1, njobs)));
}

/// Order-preserving parallel map over [0, n). The body must be pure.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    unsigned nt = effective_threads(n);
    if (nt <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr eptr;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) eptr = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (eptr) std::rethrow_exception(eptr);
}

} // namespace frachardy
