#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace powermix::detail {

/// Runs body(c) for c in [0, chunks). Work is split statically across threads;
/// callers store per-chunk results and reduce them in chunk order.
template <class Body>
void for_each_chunk(std::size_t chunks, Body&& body) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t c = t; c < chunks; c += workers) body(c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Size of chunk c when n items are split into `chunks` nearly equal parts.
inline std::size_t chunk_size(std::size_t n, std::size_t chunks, std::size_t c) {
    return n / chunks + (c < n % chunks ? 1 : 0);
}

inline constexpr std::size_t kMonteCarloChunks = 64;

}  // namespace powermix::detail
