#pragma once

// Replicate fan-out. Each replicate r draws from the stream keyed by
// (seed, r) and writes into its own slot, so results are identical for any
// worker count; aggregation happens over the index-ordered vector.

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace dcp {

inline int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// fn: (std::int64_t replicate_index) -> Result
template <class Fn>
auto run_replicates(std::int64_t replicates, int workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::int64_t>> {
    using Result = std::invoke_result_t<Fn&, std::int64_t>;
    std::vector<Result> results(static_cast<std::size_t>(replicates));
    if (replicates == 0) return results;
    if (workers < 1) workers = 1;
    if (workers == 1) {
        for (std::int64_t r = 0; r < replicates; ++r)
            results[static_cast<std::size_t>(r)] = fn(r);
        return results;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (true) {
            const std::int64_t r = next.fetch_add(1);
            if (r >= replicates || failed.load(std::memory_order_relaxed)) break;
            try {
                results[static_cast<std::size_t>(r)] = fn(r);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace dcp
