#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace castnet::detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Number of fixed work blocks a source sweep is cut into. Independent of
/// the thread count so per-block partial sums are always the same.
inline constexpr std::size_t kSweepBlocks = 64;

/// Calls body(block, begin, end) for kSweepBlocks contiguous ranges covering
/// [0, n). Blocks are handed to workers dynamically; the caller merges
/// per-block results in block order.
template <class Body>
void for_each_block(std::size_t n, unsigned threads, Body&& body) {
    const std::size_t blocks = kSweepBlocks;
    auto range = [&](std::size_t b) {
        return std::pair<std::size_t, std::size_t>{n * b / blocks, n * (b + 1) / blocks};
    };
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(blocks));
    if (threads <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            auto [lo, hi] = range(b);
            body(b, lo, hi);
        }
        return;
    }
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr failure;
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (;;) {
                std::size_t b;
                {
                    std::lock_guard lock(mu);
                    if (next >= blocks || failure) return;
                    b = next++;
                }
                try {
                    auto [lo, hi] = range(b);
                    body(b, lo, hi);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace castnet::detail
