#pragma once

// Helpers shared by the unit tests: random odd windows and a naive replay
// oracle that never touches the library's step functions.

#include <cstdint>
#include <random>
#include <vector>

#include "tetra/core.hpp"

namespace tetra::testing {

inline BigInt random_odd(std::mt19937_64& rng, unsigned max_bits) {
    std::uniform_int_distribution<unsigned> width(1, max_bits);
    const unsigned bits = width(rng);
    BigInt x = 0;
    for (unsigned done = 0; done < bits; done += 64) {
        x <<= 64;
        x += rng();
    }
    x >>= (((bits + 63) / 64) * 64 - bits);
    x |= 1;
    return x;
}

inline Window random_window(std::mt19937_64& rng, unsigned max_bits = 200) {
    return Window(random_odd(rng, max_bits), random_odd(rng, max_bits), random_odd(rng, max_bits),
                  random_odd(rng, max_bits));
}

/// Divides by two while even, one bit at a time.
inline std::pair<BigInt, unsigned> naive_strip_twos(BigInt s) {
    unsigned d = 0;
    while (s % 2 == 0) {
        s /= 2;
        ++d;
    }
    return {s, d};
}

inline std::vector<BigInt> naive_sequence(std::vector<BigInt> terms, std::size_t n, std::vector<unsigned>* exps = nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = terms.size();
        auto [t, d] = naive_strip_twos(terms[k - 1] + terms[k - 2] + terms[k - 3] + terms[k - 4]);
        terms.push_back(t);
        if (exps) exps->push_back(d);
    }
    return terms;
}

}  // namespace tetra::testing

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tetra/analysis.hpp"

namespace tetra::testing {

/// Reads a census written by tests/oracles/brute_force.py:
/// header, then "cycle terms",period,basin rows, then unresolved,N.
inline CycleCensus load_golden_census(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing golden file " + path);
    CycleCensus census;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.rfind("unresolved,", 0) == 0) {
            census.unresolved = std::stoull(line.substr(11));
            census.seed_count += census.unresolved;
            continue;
        }
        const auto close = line.find('"', 1);
        std::istringstream terms(line.substr(1, close - 1));
        std::vector<BigInt> cycle;
        std::string t;
        while (terms >> t) cycle.emplace_back(t);
        const std::string rest = line.substr(close + 2);
        const auto basin = std::stoull(rest.substr(rest.find(',') + 1));
        census.basins[cycle] = basin;
        census.seed_count += basin;
    }
    return census;
}

}  // namespace tetra::testing
