#pragma once

/**
 * @file core.hpp
 * @brief 2-free Tetranacci recurrence: forward step, backward inverse, replay.
 *
 * A 2-free Tetranacci sequence starts from four odd positive integers and
 * continues with
 *
 *   a(i+4) = (a(i) + a(i+1) + a(i+2) + a(i+3)) / 2^d(i)
 *
 * where 2^d(i) is the largest power of two dividing the sum. The sum of four
 * odd numbers is even, so d(i) >= 1 and every term stays odd.
 *
 * The window of the four most recent terms is the complete state.
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tetra {

using BigInt = boost::multiprecision::cpp_int;

/// Raised for arguments that violate a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_odd(const BigInt& x) { return bit_test(x, 0); }

/// Exact 2-adic valuation of a non-zero integer (count of trailing zero bits).
inline unsigned two_adic_valuation(const BigInt& x) {
    if (x == 0) throw InvalidInput("2-adic valuation of zero is undefined");
    return static_cast<unsigned>(lsb(BigInt(abs(x))));
}

/// Four consecutive terms, oldest first.
class Window {
public:
    Window() : terms_{1, 1, 1, 1} {}

    Window(BigInt w1, BigInt w2, BigInt w3, BigInt w4)
        : terms_{std::move(w1), std::move(w2), std::move(w3), std::move(w4)} {
        validate();
    }

    explicit Window(const std::array<BigInt, 4>& terms) : terms_(terms) { validate(); }

    const BigInt& operator[](std::size_t i) const { return terms_[i]; }
    const std::array<BigInt, 4>& terms() const { return terms_; }

    BigInt sum() const {
        BigInt s = terms_[0] + terms_[1];
        s += terms_[2];
        s += terms_[3];
        return s;
    }

    /// Drop the oldest term and append `next`. `next` must be odd and positive;
    /// callers inside the library guarantee this, so it is only asserted in debug.
    void shift_in(BigInt next) {
        terms_[0] = std::move(terms_[1]);
        terms_[1] = std::move(terms_[2]);
        terms_[2] = std::move(terms_[3]);
        terms_[3] = std::move(next);
    }

    /// Prepend `previous` and drop the newest term.
    void shift_back(BigInt previous) {
        terms_[3] = std::move(terms_[2]);
        terms_[2] = std::move(terms_[1]);
        terms_[1] = std::move(terms_[0]);
        terms_[0] = std::move(previous);
    }

    friend bool operator==(const Window&, const Window&) = default;

private:
    void validate() const {
        for (const auto& t : terms_) {
            if (t < 1 || !is_odd(t)) {
                throw InvalidInput("window terms must be odd positive integers, got " + t.str());
            }
        }
    }

    std::array<BigInt, 4> terms_;
};

struct StepResult {
    BigInt term;
    unsigned exponent = 0;

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

/// Seed plus every generated term; exponents[i] belongs to terms[i + 4].
struct SequenceRecord {
    std::vector<BigInt> terms;
    std::vector<unsigned> exponents;

    friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

inline StepResult step_forward(const Window& w) {
    BigInt s = w.sum();
    const unsigned d = static_cast<unsigned>(lsb(s));
    s >>= d;
    return {std::move(s), d};
}

/// Outcome of one backward step. A non-positive candidate is terminal: it is
/// reported, not thrown, because the backward extension uses it as a loop guard.
struct BackwardStep {
    BigInt candidate;

    bool terminal() const { return candidate <= 0; }
    std::optional<BigInt> term() const {
        if (terminal()) return std::nullopt;
        return candidate;
    }
};

/// Given w = (a(n+1), a(n+2), a(n+3), a(n+4)) returns a(n) = 2 a(n+4) - (a(n+1) + a(n+2) + a(n+3)),
/// the unique predecessor for which the forward step has exponent 1.
inline BackwardStep step_backward(const Window& w) {
    BigInt x = w[3] << 1;
    x -= w[0];
    x -= w[1];
    x -= w[2];
    return {std::move(x)};
}

/// Advance `w` in place by one step and return the exponent.
inline unsigned advance(Window& w) {
    auto [term, d] = step_forward(w);
    w.shift_in(std::move(term));
    return d;
}

inline SequenceRecord generate(const Window& seed, std::size_t n) {
    SequenceRecord rec;
    rec.terms.reserve(n + 4);
    rec.exponents.reserve(n);
    rec.terms.assign(seed.terms().begin(), seed.terms().end());
    Window w = seed;
    for (std::size_t i = 0; i < n; ++i) {
        rec.exponents.push_back(advance(w));
        rec.terms.push_back(w[3]);
    }
    return rec;
}

/// Parse a strictly decimal, optionally signed integer.
inline BigInt parse_bigint(std::string_view text) {
    std::size_t i = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
    if (i == text.size()) throw InvalidInput("expected an integer, got '" + std::string(text) + "'");
    for (std::size_t k = i; k < text.size(); ++k) {
        if (text[k] < '0' || text[k] > '9') {
            throw InvalidInput("expected an integer, got '" + std::string(text) + "'");
        }
    }
    return BigInt(std::string(text));
}

/// Parse "a,b,c,d" into a validated window.
inline Window parse_window(std::string_view text) {
    std::array<BigInt, 4> terms;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (count == 4) throw InvalidInput("a window has exactly four terms");
        terms[count++] = parse_bigint(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (count != 4) throw InvalidInput("a window has exactly four terms");
    return Window(terms);
}

struct WindowHash {
    std::size_t operator()(const Window& w) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& t : w.terms()) {
            const auto& be = t.backend();
            h ^= static_cast<std::size_t>(be.limbs()[0]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= be.size() + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace tetra
