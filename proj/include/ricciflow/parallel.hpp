#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ricciflow {

// Runs fn(i) for i in [0, count). Work is split into contiguous index blocks,
// one per worker; every slot is written by exactly one invocation, so results
// are deterministic regardless of scheduling. Falls back to a plain loop for
// small batches.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t grain = 32) {
    const std::size_t hw = std::thread::hardware_concurrency();
    const std::size_t workers = hw == 0 ? 1 : hw;
    if (workers <= 1 || count <= grain) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t blocks = std::min(workers, (count + grain - 1) / grain);
    const std::size_t chunk = (count + blocks - 1) / blocks;
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    pool.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace ricciflow
