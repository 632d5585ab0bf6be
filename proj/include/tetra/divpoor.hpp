#pragma once

/**
 * @file divpoor.hpp
 * @brief Initially division-poor sequences.
 *
 * If every step divided by exactly 2, the recurrence would be linear with
 * characteristic polynomial f(x) = 2x^4 - x^3 - x^2 - x - 1, whose positive
 * root alpha ~ 1.3490344565611562 dominates. Seeding four terms on the
 * geometric progression 2q^3 r^i + 1 with r = p/q close to alpha and running
 * the d = 1 recurrence backwards while terms stay positive yields seeds whose
 * first steps all divide by exactly 2.
 *
 * alpha is only ever held as an exact rational bracket [lo, hi] with
 * f(lo) < 0 < f(hi).
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "rational.hpp"

namespace tetra {

/// f(x) = 2x^4 - x^3 - x^2 - x - 1, evaluated exactly.
inline Rational alpha_polynomial(const Rational& x) {
    return (((2 * x - 1) * x - 1) * x - 1) * x - 1;
}

namespace detail {

/// Sign of f(m / 2^k), computed on the scaled integer 2^{4k} f(m / 2^k).
inline int alpha_polynomial_sign(const BigInt& m, unsigned k) {
    const BigInt one = BigInt(1) << k;
    const BigInt m2 = m * m;
    const BigInt v = 2 * m2 * m2 - m2 * m * one - m2 * (one * one) - m * (one * one * one) - (one * one) * (one * one);
    return v.sign();
}

}  // namespace detail

struct AlphaApprox {
    Rational lo;
    Rational hi;
    unsigned digits = 0;  ///< decimal places justified by the requested tolerance

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }

    /// Midpoint rounded to `digits` places. alpha sits just above a 16-digit
    /// boundary, so a truncated lower endpoint can misprint the last digit.
    std::string decimal() const { return decimal(digits); }
    std::string decimal(unsigned places) const { return to_decimal_rounded(midpoint(), places); }
};

/// Smallest D with 10^-D <= tolerance.
inline unsigned decimal_places_for(const Rational& tolerance) {
    unsigned d = 0;
    Rational step = 1;
    while (step > tolerance) {
        step /= 10;
        ++d;
    }
    return d;
}

/// Bisects [1, 2] (f(1) = -2, f(2) = 17) until the bracket is no wider than `tolerance`.
inline AlphaApprox isolate_alpha(const Rational& tolerance) {
    if (tolerance <= 0) throw InvalidInput("tolerance must be positive");
    // Bracket is [lo_num / 2^k, (lo_num + 1) / 2^k].
    BigInt lo_num = 1;
    unsigned k = 0;
    while (Rational(BigInt(1), BigInt(1) << k) > tolerance) {
        // Refine the grid; the bracket becomes [L, L + 2] / 2^k with midpoint L + 1.
        lo_num <<= 1;
        ++k;
        // alpha is irrational, so f never vanishes on a grid point.
        if (detail::alpha_polynomial_sign(lo_num + 1, k) < 0) ++lo_num;
    }
    const Rational scale(BigInt(1) << k);
    return AlphaApprox{Rational(lo_num) / scale, Rational(lo_num + 1) / scale, decimal_places_for(tolerance)};
}

struct ContinuedFraction {
    std::vector<BigInt> quotients;
    std::vector<Rational> convergents;
    AlphaApprox bracket;  ///< the bracket that certified every quotient
};

/// Partial quotients of `lo < x < hi` that agree across the whole bracket, at most `limit`.
inline std::vector<BigInt> certified_quotients(Rational lo, Rational hi, std::size_t limit) {
    std::vector<BigInt> out;
    while (out.size() < limit) {
        const BigInt a = floor_of(lo);
        if (floor_of(hi) != a || lo == a) break;
        out.push_back(a);
        const Rational next_lo = 1 / (hi - a);
        const Rational next_hi = 1 / (lo - a);
        lo = next_lo;
        hi = next_hi;
    }
    return out;
}

/// p(n) / q(n) from the usual three-term recurrences.
inline std::vector<Rational> convergents_of(const std::vector<BigInt>& quotients) {
    std::vector<Rational> out;
    out.reserve(quotients.size());
    BigInt h_prev = 1, h_prev2 = 0;
    BigInt k_prev = 0, k_prev2 = 1;
    for (const auto& a : quotients) {
        BigInt h = a * h_prev + h_prev2;
        BigInt k = a * k_prev + k_prev2;
        out.emplace_back(h, k);
        h_prev2 = std::move(h_prev);
        h_prev = std::move(h);
        k_prev2 = std::move(k_prev);
        k_prev = std::move(k);
    }
    return out;
}

inline ContinuedFraction continued_fraction_of_alpha(std::size_t n_terms) {
    if (n_terms < 1) throw InvalidInput("need at least one partial quotient");
    Rational tolerance(BigInt(1), BigInt(1) << 64);
    while (true) {
        AlphaApprox bracket = isolate_alpha(tolerance);
        auto quotients = certified_quotients(bracket.lo, bracket.hi, n_terms);
        if (quotients.size() == n_terms) {
            auto convergents = convergents_of(quotients);
            return {std::move(quotients), std::move(convergents), std::move(bracket)};
        }
        tolerance *= tolerance;
    }
}

struct ConstructionResult {
    Rational r;
    BigInt k;                  ///< q^3
    Window forward_anchor;     ///< 2k r^i + 1 for i = 0..3
    Window seed;               ///< leftmost window after backward extension
    std::size_t backward_steps = 0;
    std::size_t division_poor_steps = 0;  ///< maximal n with d_1 .. d_n all equal to 1
    std::size_t segment_terms = 0;        ///< division_poor_steps + 4
    std::vector<BigInt> terms;            ///< seed through anchor, oldest first
};

/// Largest n <= max_steps such that the first n steps from `seed` all have exponent 1.
inline std::size_t measure_division_poor(const Window& seed, std::size_t max_steps) {
    Window w = seed;
    std::size_t n = 0;
    while (n < max_steps && advance(w) == 1) ++n;
    return n;
}

inline constexpr std::size_t default_measure_limit = 1'000'000;

inline ConstructionResult construct(const Rational& r, std::size_t measure_limit = default_measure_limit) {
    if (r <= 1) throw InvalidInput("r must exceed 1, got " + to_string(r));
    const BigInt p = numerator(r);
    const BigInt q = denominator(r);

    ConstructionResult out;
    out.r = r;
    out.k = q * q * q;
    out.forward_anchor = Window(2 * q * q * q + 1, 2 * p * q * q + 1, 2 * p * p * q + 1, 2 * p * p * p + 1);

    std::vector<BigInt> reversed(out.forward_anchor.terms().rbegin(), out.forward_anchor.terms().rend());
    Window w = out.forward_anchor;
    while (true) {
        const BackwardStep back = step_backward(w);
        if (back.terminal()) break;
        const Window extended(back.candidate, w[0], w[1], w[2]);
        if (step_forward(extended) != StepResult{w[3], 1}) {
            throw std::logic_error("backward step does not invert the forward step");
        }
        reversed.push_back(back.candidate);
        w = extended;
        ++out.backward_steps;
    }
    out.seed = w;
    out.terms.assign(reversed.rbegin(), reversed.rend());
    out.division_poor_steps = measure_division_poor(out.seed, measure_limit);
    out.segment_terms = out.division_poor_steps + 4;
    return out;
}

/// Natural log of a positive integer of any size.
inline double log_of(const BigInt& x) {
    if (x <= 0) throw InvalidInput("log of a non-positive integer");
    const auto bits = msb(x);
    if (bits < 960) return std::log(static_cast<double>(x));
    const unsigned shift = static_cast<unsigned>(bits - 62);
    return std::log(static_cast<double>(BigInt(x >> shift))) + shift * std::log(2.0);
}

inline double log_of(const Rational& x) { return log_of(numerator(x)) - log_of(denominator(x)); }

struct LengthPrediction {
    BigInt q;
    double predicted_bound = 0.0;
};

/// Heuristic bound on n + 1: log[(2q^3 + 1) / (6q)] / log(5 alpha), asymptotic
/// error terms dropped. Not a guarantee for any finite q.
inline LengthPrediction predict_length(const BigInt& q) {
    if (q < 2) throw InvalidInput("q must be at least 2");
    static const double alpha = static_cast<double>(isolate_alpha(Rational(BigInt(1), BigInt(1) << 80)).midpoint());
    const double numer = log_of(BigInt(2 * q * q * q + 1)) - log_of(BigInt(6 * q));
    return {q, numer / std::log(5.0 * alpha)};
}

}  // namespace tetra
