#pragma once

/**
 * @file analysis.hpp
 * @brief Trajectory classification, cycle census over seed boxes, cycle drift.
 *
 * Four consecutive terms determine the rest of a sequence, so a trajectory is
 * eventually periodic exactly when some window recurs. classify() detects the
 * first recurrence and reports the exact preperiod and minimal period; a run
 * that finds no recurrence within its step budget (or whose terms pass the
 * value cap) is reported as Unresolved, which is a report and not a claim of
 * unboundedness.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace tetra {

inline BigInt default_value_cap() { return pow(BigInt(10), 100); }

enum class CycleDetector {
    hash_table,  ///< exact, memory grows with the trajectory
    brent,       ///< constant memory, recomputes the trajectory
};

struct Classification {
    enum class Kind { periodic, unresolved };

    Kind kind = Kind::unresolved;
    std::size_t preperiod = 0;  ///< index of the first window that lies on the cycle
    std::size_t period = 0;
    std::vector<BigInt> cycle;  ///< one full period, starting at term index `preperiod`
    std::size_t steps_taken = 0;
    BigInt max_term;
    bool cap_exceeded = false;

    bool periodic() const { return kind == Kind::periodic; }

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// One period of the cycle entered from `start`, beginning with start[0].
inline std::vector<BigInt> read_cycle(Window start, std::size_t period) {
    std::vector<BigInt> out;
    out.reserve(period);
    for (std::size_t i = 0; i < period; ++i) {
        out.push_back(start[0]);
        advance(start);
    }
    return out;
}

namespace detail {

inline void check_max_steps(std::size_t max_steps) {
    if (max_steps < 1) throw InvalidInput("max_steps must be at least 1");
}

inline Classification classify_hash(const Window& seed, std::size_t max_steps, const std::optional<BigInt>& cap) {
    Classification out;
    out.max_term = *std::max_element(seed.terms().begin(), seed.terms().end());

    std::unordered_map<Window, std::size_t, WindowHash> seen;
    seen.reserve(std::min<std::size_t>(max_steps + 1, 1u << 12));
    seen.emplace(seed, 0);

    Window w = seed;
    for (std::size_t i = 1; i <= max_steps; ++i) {
        advance(w);
        const BigInt& t = w[3];
        if (t > out.max_term) out.max_term = t;
        if (cap && t > *cap) {
            out.steps_taken = i;
            out.cap_exceeded = true;
            return out;
        }
        auto [it, inserted] = seen.try_emplace(w, i);
        if (!inserted) {
            out.kind = Classification::Kind::periodic;
            out.preperiod = it->second;
            out.period = i - it->second;
            out.cycle = read_cycle(w, out.period);
            out.steps_taken = i;
            return out;
        }
    }
    out.steps_taken = max_steps;
    return out;
}

inline Classification classify_brent(const Window& seed, std::size_t max_steps, const std::optional<BigInt>& cap) {
    // Brent's power-of-two search finds the period within 4 * (mu + lambda)
    // hare steps; past that budget no recurrence can lie inside max_steps.
    const std::size_t budget = 4 * max_steps + 8;
    auto exceeds = [&](const BigInt& t) { return cap && t > *cap; };

    Classification out;
    std::optional<std::size_t> period;
    {
        Window tortoise = seed;
        Window hare = seed;
        advance(hare);
        std::size_t hare_steps = 1;
        std::size_t power = 1;
        std::size_t lam = 1;
        bool escaped = exceeds(hare[3]);
        while (!escaped && !(tortoise == hare) && hare_steps < budget) {
            if (power == lam) {
                tortoise = hare;
                power *= 2;
                lam = 0;
            }
            advance(hare);
            ++hare_steps;
            ++lam;
            escaped = exceeds(hare[3]);
        }
        if (!escaped && tortoise == hare) period = lam;
    }

    if (period) {
        Window tortoise = seed;
        Window hare = seed;
        for (std::size_t i = 0; i < *period; ++i) advance(hare);
        std::size_t mu = 0;
        while (!(tortoise == hare)) {
            advance(tortoise);
            advance(hare);
            ++mu;
        }
        if (mu + *period <= max_steps) {
            out.kind = Classification::Kind::periodic;
            out.preperiod = mu;
            out.period = *period;
            out.cycle = read_cycle(tortoise, *period);
            out.steps_taken = mu + *period;
        }
    }

    // Replay the reported prefix for the running maximum and the cap check.
    const std::size_t horizon = out.periodic() ? out.steps_taken : max_steps;
    Window w = seed;
    out.max_term = *std::max_element(seed.terms().begin(), seed.terms().end());
    for (std::size_t i = 1; i <= horizon; ++i) {
        advance(w);
        if (w[3] > out.max_term) out.max_term = w[3];
        if (exceeds(w[3])) {
            Classification capped;
            capped.max_term = std::move(out.max_term);
            capped.steps_taken = i;
            capped.cap_exceeded = true;
            return capped;
        }
    }
    if (!out.periodic()) out.steps_taken = max_steps;
    return out;
}

}  // namespace detail

inline Classification classify(const Window& seed, std::size_t max_steps,
                               const std::optional<BigInt>& value_cap = default_value_cap(),
                               CycleDetector detector = CycleDetector::hash_table) {
    detail::check_max_steps(max_steps);
    return detector == CycleDetector::brent ? detail::classify_brent(seed, max_steps, value_cap)
                                            : detail::classify_hash(seed, max_steps, value_cap);
}

/// Rotation of `cycle` that is lexicographically least.
inline std::vector<BigInt> canonical_rotation(const std::vector<BigInt>& cycle) {
    std::vector<BigInt> best = cycle;
    std::vector<BigInt> rot = cycle;
    for (std::size_t k = 1; k < cycle.size(); ++k) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

/// Orders canonical cycles by period, then lexicographically.
struct CycleOrder {
    bool operator()(const std::vector<BigInt>& a, const std::vector<BigInt>& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

struct CycleCensus {
    std::map<std::vector<BigInt>, std::uint64_t, CycleOrder> basins;  ///< canonical cycle -> seeds reaching it
    std::uint64_t seed_count = 0;
    std::uint64_t unresolved = 0;
    std::uint64_t cap_exceeded = 0;  ///< subset of `unresolved`

    void record(const Classification& c) {
        ++seed_count;
        if (c.periodic()) {
            ++basins[canonical_rotation(c.cycle)];
        } else {
            ++unresolved;
            if (c.cap_exceeded) ++cap_exceeded;
        }
    }

    void merge(const CycleCensus& other) {
        for (const auto& [cycle, count] : other.basins) basins[cycle] += count;
        seed_count += other.seed_count;
        unresolved += other.unresolved;
        cap_exceeded += other.cap_exceeded;
    }

    friend bool operator==(const CycleCensus&, const CycleCensus&) = default;
};

/// Classifies every seed with odd terms in (0, bound) and tallies the cycles reached.
inline CycleCensus period_search(std::uint64_t bound, std::size_t max_steps,
                                 const std::optional<BigInt>& value_cap = default_value_cap(),
                                 const ParallelOptions& opts = {},
                                 CycleDetector detector = CycleDetector::hash_table) {
    detail::check_max_steps(max_steps);
    const SeedSpace space(bound);
    auto shards = map_shards<CycleCensus>(space.shard_count(), opts, [&](std::size_t shard) {
        CycleCensus local;
        for (auto i = space.shard_begin(shard); i < space.shard_end(shard); ++i) {
            local.record(classify(space.at(i), max_steps, value_cap, detector));
        }
        return local;
    });
    CycleCensus total;
    for (const auto& s : shards) total.merge(s);
    return total;
}

/// Mean over one period of a(k+4) - (a(k) + a(k+1) + a(k+2) + a(k+3)) / 4, indices mod p.
inline Rational cycle_drift(const std::vector<BigInt>& cycle) {
    const std::size_t p = cycle.size();
    if (p == 0) throw InvalidInput("empty cycle");
    auto at = [&](std::size_t i) -> const BigInt& { return cycle[i % p]; };

    Rational total = 0;
    for (std::size_t k = 0; k < p; ++k) {
        const Window w(at(k), at(k + 1), at(k + 2), at(k + 3));
        if (step_forward(w).term != at(k + 4)) {
            throw InvalidInput("sequence does not close into a cycle at offset " + std::to_string(k));
        }
        total += Rational(at(k + 4)) - Rational(w.sum(), 4);
    }
    return total / p;
}

}  // namespace tetra
