#pragma once

// Shard-parallel map with an ordered merge. Results depend only on the shard
// decomposition, never on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "core.hpp"

namespace tetra {

/// Called with (completed shards, total shards). May be invoked from any worker.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

struct ParallelOptions {
    unsigned threads = 1;
    ProgressFn progress;
};

/// Runs `work(shard)` for every shard in [0, n_shards) and returns the results
/// indexed by shard.
template <typename Result, typename Work>
std::vector<Result> map_shards(std::size_t n_shards, const ParallelOptions& opts, Work&& work) {
    std::vector<Result> results(n_shards);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, opts.threads), std::max<std::size_t>(1, n_shards)));

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::mutex progress_mutex;

    auto run = [&] {
        while (true) {
            const std::size_t shard = next.fetch_add(1);
            if (shard >= n_shards) return;
            try {
                results[shard] = work(shard);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_shards;
                return;
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (opts.progress) {
                std::lock_guard lock(progress_mutex);
                opts.progress(finished, n_shards);
            }
        }
    };

    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// All seeds (w1, w2, w3, w4) with odd entries in (0, bound), in lexicographic
/// order. Seed index i maps to digits of i in base (bound / 2), w1 most significant.
class SeedSpace {
public:
    explicit SeedSpace(std::uint64_t bound) : bound_(bound) {
        if (bound < 2) throw InvalidInput("seed bound must be at least 2");
        radix_ = bound / 2;
        size_ = radix_ * radix_ * radix_ * radix_;
    }

    std::uint64_t bound() const { return bound_; }
    std::uint64_t size() const { return size_; }

    Window at(std::uint64_t index) const {
        std::array<BigInt, 4> t;
        for (int k = 3; k >= 0; --k) {
            t[static_cast<std::size_t>(k)] = 2 * (index % radix_) + 1;
            index /= radix_;
        }
        return Window(t);
    }

    /// Shard s covers seeds whose leading term index equals s / radix and
    /// second term index equals s % radix, i.e. radix^2 seeds per shard.
    std::size_t shard_count() const { return static_cast<std::size_t>(radix_ * radix_); }
    std::uint64_t shard_begin(std::size_t shard) const { return shard * radix_ * radix_; }
    std::uint64_t shard_end(std::size_t shard) const { return (shard + 1) * radix_ * radix_; }

private:
    std::uint64_t bound_;
    std::uint64_t radix_ = 0;
    std::uint64_t size_ = 0;
};

}  // namespace tetra
