#pragma once

/**
 * @file stochastic.hpp
 * @brief Probabilistic growth model and empirical surveys of real sequences.
 *
 * The model replaces the true division exponent with an independent draw,
 * P(d = j) = 2^-j for j >= 1. Under that law the expected value of
 * 1/2^d - 1/4 is 1/12, so a term exceeds the mean of its four predecessors by
 * s/12 on average, where s is their sum.
 *
 * Randomness: std::mt19937_64, whose output sequence is fixed by the C++
 * standard. Stream i of master seed m is seeded with
 * std::seed_seq{lo32(m), hi32(m), lo32(i), hi32(i)}; single trajectories use
 * stream 0. Exponents are drawn from raw bits, never from floating point.
 */

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "divpoor.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace tetra {

inline constexpr std::uint64_t default_rng_seed = 20160521;
inline constexpr std::uint64_t desk_scale_bound = 32;

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master_seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Engine(seq);
}

/// Geometric draw with P(j = n) = 2^-n: each bit of a 64-bit word is one fair
/// coin, and j counts flips up to and including the first 1 bit.
template <typename Urbg>
unsigned sample_exponent(Urbg& rng) {
    static_assert(Urbg::max() == ~std::uint64_t{0} && Urbg::min() == 0, "needs a full 64-bit generator");
    unsigned j = 1;
    while (true) {
        const std::uint64_t bits = rng();
        if (bits != 0) return j + static_cast<unsigned>(std::countr_zero(bits));
        j += 64;
    }
}

enum class ModelArithmetic {
    exact,       ///< keep every value as an exact rational
    log_domain,  ///< keep only log values; for long runs
};

struct ModelTrajectory {
    std::vector<Rational> values;   ///< empty in log-domain runs
    std::vector<double> log_values;
    std::vector<unsigned> exponents;  ///< exponents[k] produced value k + 4
    std::uint64_t rng_seed = 0;
};

struct ModelRun {
    ModelTrajectory trajectory;
    std::map<unsigned, std::uint64_t> exponent_counts;
    /// Mean of 1/2^d - 1/4 over all steps; absent when no step was taken.
    std::optional<Rational> drift;

    double drift_value() const { return drift ? static_cast<double>(*drift) : std::nan(""); }
};

/// Exact drift statistic from a tally of exponents.
inline std::optional<Rational> drift_from_counts(const std::map<unsigned, std::uint64_t>& counts) {
    std::uint64_t steps = 0;
    Rational total = 0;
    for (const auto& [d, c] : counts) {
        steps += c;
        total += Rational(BigInt(c), BigInt(1) << d) - Rational(BigInt(c), BigInt(4));
    }
    if (steps == 0) return std::nullopt;
    return total / steps;
}

/// Evolves the model from `start` for `steps` steps, drawing exponents from
/// `next_exponent()`.
template <typename ExponentSource>
ModelRun simulate_model_with(const Window& start, std::size_t steps, ExponentSource&& next_exponent,
                             ModelArithmetic arithmetic = ModelArithmetic::exact) {
    ModelRun run;
    auto& traj = run.trajectory;
    if (steps == 0) return run;

    traj.exponents.reserve(steps);
    traj.log_values.reserve(steps + 4);
    for (const auto& t : start.terms()) traj.log_values.push_back(log_of(t));

    if (arithmetic == ModelArithmetic::exact) {
        traj.values.reserve(steps + 4);
        for (const auto& t : start.terms()) traj.values.emplace_back(t);
        for (std::size_t k = 0; k < steps; ++k) {
            const unsigned d = next_exponent();
            const auto& v = traj.values;
            const std::size_t n = v.size();
            Rational s = v[n - 4] + v[n - 3] + v[n - 2] + v[n - 1];
            Rational next = s / Rational(BigInt(1) << d);
            traj.log_values.push_back(log_of(next));
            traj.values.push_back(std::move(next));
            traj.exponents.push_back(d);
            ++run.exponent_counts[d];
        }
    } else {
        // scaled[i] * exp(log_scale) is the true value; rescale before overflow.
        std::array<double, 4> scaled{};
        double log_scale = traj.log_values[3];
        for (std::size_t i = 0; i < 4; ++i) scaled[i] = std::exp(traj.log_values[i] - log_scale);
        for (std::size_t k = 0; k < steps; ++k) {
            const unsigned d = next_exponent();
            const double next = std::ldexp(scaled[0] + scaled[1] + scaled[2] + scaled[3], -static_cast<int>(d));
            scaled = {scaled[1], scaled[2], scaled[3], next};
            traj.log_values.push_back(std::log(next) + log_scale);
            if (next > 1e100 || next < 1e-100) {
                for (auto& x : scaled) x /= next;
                log_scale += std::log(next);
            }
            traj.exponents.push_back(d);
            ++run.exponent_counts[d];
        }
    }
    run.drift = drift_from_counts(run.exponent_counts);
    return run;
}

inline ModelRun simulate_model(const Window& start, std::size_t steps, std::uint64_t rng_seed,
                               ModelArithmetic arithmetic = ModelArithmetic::exact) {
    Engine rng = make_engine(rng_seed);
    ModelRun run = simulate_model_with(start, steps, [&] { return sample_exponent(rng); }, arithmetic);
    run.trajectory.rng_seed = rng_seed;
    return run;
}

/// Per-term log growth (log a_N - log a_0) / N over the whole trajectory.
inline double growth_estimate(const ModelTrajectory& traj) {
    const auto& logs = traj.log_values;
    if (logs.size() < 100) throw InvalidInput("growth estimate needs at least 100 terms");
    for (double x : logs) {
        if (!std::isfinite(x)) throw std::domain_error("trajectory has a zero or non-finite value");
    }
    return (logs.back() - logs.front()) / static_cast<double>(logs.size() - 1);
}

struct EnsembleSummary {
    std::uint64_t stream = 0;
    Rational drift;
    double growth = 0.0;
};

/// Independent log-domain runs on streams 0 .. runs-1 of `master_seed`.
inline std::vector<EnsembleSummary> simulate_ensemble(const Window& start, std::size_t steps, std::size_t runs,
                                                      std::uint64_t master_seed, const ParallelOptions& opts = {}) {
    if (steps < 100) throw InvalidInput("ensemble runs need at least 100 steps");
    return map_shards<EnsembleSummary>(runs, opts, [&](std::size_t i) {
        Engine rng = make_engine(master_seed, i);
        const ModelRun run =
            simulate_model_with(start, steps, [&] { return sample_exponent(rng); }, ModelArithmetic::log_domain);
        return EnsembleSummary{i, *run.drift, growth_estimate(run.trajectory)};
    });
}

struct Histogram {
    enum class Domain { residue, exponent };

    Domain domain = Domain::residue;
    std::uint64_t modulus = 0;  ///< residue histograms only
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(std::uint64_t cls, std::uint64_t n = 1) {
        counts[cls] += n;
        total += n;
    }

    void merge(const Histogram& other) {
        for (const auto& [cls, n] : other.counts) add(cls, n);
    }

    std::uint64_t count(std::uint64_t cls) const {
        const auto it = counts.find(cls);
        return it == counts.end() ? 0 : it->second;
    }

    double frequency(std::uint64_t cls) const {
        return total == 0 ? 0.0 : static_cast<double>(count(cls)) / static_cast<double>(total);
    }

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

namespace detail {

inline std::uint64_t low_word(const BigInt& x) { return static_cast<std::uint64_t>(x.backend().limbs()[0]); }

inline void check_survey_args(std::uint64_t bound, std::size_t terms_per_seed) {
    if (bound < 2) throw InvalidInput("survey bound must be at least 2");
    if (terms_per_seed < 4) throw InvalidInput("terms per seed must be at least 4");
}

}  // namespace detail

/// Counts of (term mod modulus) over the first `terms_per_seed` terms (seed
/// included) of every sequence with odd seed terms in (0, bound).
inline Histogram residue_survey(std::uint64_t bound, std::size_t terms_per_seed, std::uint64_t modulus,
                                const ParallelOptions& opts = {}) {
    detail::check_survey_args(bound, terms_per_seed);
    if (modulus < 2 || !std::has_single_bit(modulus) || modulus > (std::uint64_t{1} << 32)) {
        throw InvalidInput("modulus must be a power of two between 2 and 2^32");
    }
    const std::uint64_t mask = modulus - 1;
    const SeedSpace space(bound);
    auto shards = map_shards<std::vector<std::uint64_t>>(space.shard_count(), opts, [&](std::size_t shard) {
        std::vector<std::uint64_t> local(modulus, 0);
        for (auto i = space.shard_begin(shard); i < space.shard_end(shard); ++i) {
            Window w = space.at(i);
            for (const auto& t : w.terms()) ++local[detail::low_word(t) & mask];
            for (std::size_t n = 4; n < terms_per_seed; ++n) {
                advance(w);
                ++local[detail::low_word(w[3]) & mask];
            }
        }
        return local;
    });

    Histogram h;
    h.domain = Histogram::Domain::residue;
    h.modulus = modulus;
    for (std::uint64_t c = 0; c < modulus; ++c) h.counts[c] = 0;
    for (const auto& local : shards) {
        for (std::uint64_t c = 0; c < modulus; ++c) h.add(c, local[c]);
    }
    return h;
}

/// Distribution of the division exponent over the terms_per_seed - 4 steps of
/// every sequence with odd seed terms in (0, bound).
inline Histogram exponent_survey(std::uint64_t bound, std::size_t terms_per_seed, const ParallelOptions& opts = {}) {
    detail::check_survey_args(bound, terms_per_seed);
    const SeedSpace space(bound);
    auto shards = map_shards<Histogram>(space.shard_count(), opts, [&](std::size_t shard) {
        Histogram local;
        local.domain = Histogram::Domain::exponent;
        for (auto i = space.shard_begin(shard); i < space.shard_end(shard); ++i) {
            Window w = space.at(i);
            for (std::size_t n = 4; n < terms_per_seed; ++n) local.add(advance(w));
        }
        return local;
    });
    Histogram h;
    h.domain = Histogram::Domain::exponent;
    for (const auto& local : shards) h.merge(local);
    return h;
}

}  // namespace tetra
