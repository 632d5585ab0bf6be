#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "core.hpp"

namespace tetra {

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return numerator(r); }
inline BigInt den(const Rational& r) { return denominator(r); }

/// Largest integer not exceeding r.
inline BigInt floor_of(const Rational& r) {
    BigInt q, rem;
    divide_qr(numerator(r), denominator(r), q, rem);
    if (rem < 0) --q;
    return q;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Truncates r toward negative infinity at `digits` decimal places.
inline std::string to_decimal(const Rational& r, unsigned digits) {
    BigInt scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    const BigInt scaled = floor_of(r * scale);
    const bool negative = scaled < 0;
    std::string body = BigInt(abs(scaled)).str();
    if (digits == 0) return (negative ? "-" : "") + body;
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    return (negative ? "-" : "") + body;
}

/// Rounds r to the nearest multiple of 10^-digits, halves away from zero.
inline std::string to_decimal_rounded(const Rational& r, unsigned digits) {
    Rational half(BigInt(1), BigInt(2));
    for (unsigned i = 0; i < digits; ++i) half /= 10;
    return r < 0 ? "-" + to_decimal(-r + half, digits) : to_decimal(r + half, digits);
}

/// Accepts "p", "p/q" or a plain decimal literal such as "1e-16" or "0.001".
inline Rational parse_rational(std::string_view text) {
    const std::string s(text);
    if (s.empty()) throw InvalidInput("expected a rational number");
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const BigInt p = parse_bigint(std::string_view(s).substr(0, slash));
        const BigInt q = parse_bigint(std::string_view(s).substr(slash + 1));
        if (q == 0) throw InvalidInput("zero denominator in '" + s + "'");
        return Rational(p, q);
    }

    std::string mantissa = s;
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        try {
            std::size_t used = 0;
            exponent = std::stol(s.substr(e + 1), &used);
            if (used != s.size() - e - 1) throw InvalidInput("bad exponent");
        } catch (const std::exception&) {
            throw InvalidInput("malformed number '" + s + "'");
        }
    }
    if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
        exponent -= static_cast<long>(mantissa.size() - dot - 1);
        mantissa.erase(dot, 1);
    }
    if (mantissa.empty() || mantissa == "-" || mantissa == "+") throw InvalidInput("malformed number '" + s + "'");
    Rational value(parse_bigint(mantissa));
    BigInt ten_pow = 1;
    for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) ten_pow *= 10;
    return exponent < 0 ? value / Rational(ten_pow) : value * Rational(ten_pow);
}

}  // namespace tetra
