#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "tubemeasure/random.hpp"

namespace tubemeasure::detail {

/// Splits `total` work items over workers and runs
/// fn(quota, RandomStream) -> Acc on each, worker w drawing from
/// stream.substream(w). Accumulators come back in worker order, so merged
/// results depend only on (seed, total, threads), never on scheduling.
template <class Acc, class Fn>
std::vector<Acc> run_workers(int threads, std::uint64_t total, const RandomStream& stream,
                             Fn&& fn) {
    if (threads < 1) threads = 1;
    if (total > 0 && static_cast<std::uint64_t>(threads) > total) {
        threads = static_cast<int>(total);
    }
    const std::uint64_t t = static_cast<std::uint64_t>(threads);
    std::vector<Acc> acc(static_cast<std::size_t>(threads));
    auto run = [&](int w) {
        const std::uint64_t quota = total / t + (static_cast<std::uint64_t>(w) < total % t ? 1 : 0);
        RandomStream rng = stream.substream(static_cast<std::uint64_t>(w));
        acc[static_cast<std::size_t>(w)] = fn(quota, rng);
    };
    if (threads == 1) {
        run(0);
        return acc;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
    return acc;
}

} // namespace tubemeasure::detail
