#pragma once

// Structured export of results as CSV or JSON lines.
//
// CSV: header row, then one row per record, every row terminated by '\n'.
// Fields containing a comma, quote or newline are quoted with doubled quotes.
// JSON lines: one object per record, keys in column order. Big integers and
// rationals are always decimal strings; counts are JSON integers.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "core.hpp"
#include "divpoor.hpp"
#include "rational.hpp"
#include "stochastic.hpp"

namespace tetra {

enum class Format { csv, jsonl };

/// Exact decimal text for a big integer or rational (serialized as a JSON string).
struct Exact {
    std::string text;
    friend bool operator==(const Exact&, const Exact&) = default;
};

using Field = std::variant<Exact, std::string, std::int64_t, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Field>> rows;

    void add(std::vector<Field> row) {
        if (row.size() != columns.size()) throw std::logic_error("row width does not match the column list");
        rows.push_back(std::move(row));
    }
};

inline Field exact(const BigInt& x) { return Exact{x.str()}; }
inline Field exact(const Rational& x) { return Exact{to_string(x)}; }
inline Field count(std::uint64_t n) { return static_cast<std::int64_t>(n); }

/// Space-separated decimal list, used for cycles and seeds inside one field.
inline Field exact_list(const std::vector<BigInt>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += xs[i].str();
    }
    return Exact{std::move(out)};
}

inline Field exact_list(const Window& w) {
    return exact_list(std::vector<BigInt>(w.terms().begin(), w.terms().end()));
}

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_field(const Field& f) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exact>) return csv_escape(v.text);
            else if constexpr (std::is_same_v<T, std::string>) return csv_escape(v);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else return v ? "true" : "false";
        },
        f);
}

inline nlohmann::ordered_json json_field(const Field& f) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exact>) return v.text;
            else return v;
        },
        f);
}

}  // namespace detail

/// Writes `table` to `sink`; throws std::runtime_error if the stream fails.
inline void export_table(const Table& table, Format format, std::ostream& sink) {
    if (format == Format::csv) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) sink << ',';
            sink << detail::csv_escape(table.columns[i]);
        }
        sink << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) sink << ',';
                sink << detail::csv_field(row[i]);
            }
            sink << '\n';
        }
    } else {
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = detail::json_field(row[i]);
            sink << obj.dump() << '\n';
        }
    }
    sink.flush();
    if (!sink) throw std::runtime_error("failed to write output");
}

// Record builders --------------------------------------------------------

inline Table sequence_table(const SequenceRecord& rec) {
    Table t{{"index", "term", "exponent"}, {}};
    for (std::size_t i = 0; i < rec.terms.size(); ++i) {
        Field d = std::string{};
        if (i >= 4) d = static_cast<std::int64_t>(rec.exponents[i - 4]);
        t.add({count(i + 1), exact(rec.terms[i]), d});
    }
    return t;
}

inline Table classification_table(const Window& seed, const Classification& c) {
    Table t{{"seed", "kind", "preperiod", "period", "cycle", "steps_taken", "max_term", "cap_exceeded"}, {}};
    const bool p = c.periodic();
    t.add({exact_list(seed), std::string(p ? "periodic" : "unresolved"), p ? count(c.preperiod) : Field{std::string{}},
           p ? count(c.period) : Field{std::string{}}, exact_list(c.cycle), count(c.steps_taken), exact(c.max_term),
           c.cap_exceeded});
    return t;
}

inline Table census_table(const CycleCensus& census) {
    Table t{{"cycle", "period", "basin", "drift"}, {}};
    for (const auto& [cycle, basin] : census.basins) {
        t.add({exact_list(cycle), count(cycle.size()), count(basin), exact(cycle_drift(cycle))});
    }
    return t;
}

/// Totals row for a census, kept separate so the cycle table stays rectangular.
inline Table census_summary_table(const CycleCensus& census) {
    Table t{{"seed_count", "periodic", "unresolved", "cap_exceeded", "distinct_cycles"}, {}};
    t.add({count(census.seed_count), count(census.seed_count - census.unresolved), count(census.unresolved),
           count(census.cap_exceeded), count(census.basins.size())});
    return t;
}

inline Table drift_table(const std::vector<BigInt>& cycle, const Rational& drift) {
    Table t{{"cycle", "period", "drift"}, {}};
    t.add({exact_list(cycle), count(cycle.size()), exact(drift)});
    return t;
}

inline Table alpha_table(const AlphaApprox& a) {
    Table t{{"lo", "hi", "width", "decimal"}, {}};
    t.add({exact(a.lo), exact(a.hi), exact(a.width()), a.decimal()});
    return t;
}

inline Table continued_fraction_table(const ContinuedFraction& cf) {
    Table t{{"index", "quotient", "convergent", "error_bound"}, {}};
    for (std::size_t i = 0; i < cf.quotients.size(); ++i) {
        const Rational& c = cf.convergents[i];
        const Rational err = std::max(Rational(abs(cf.bracket.lo - c)), Rational(abs(cf.bracket.hi - c)));
        t.add({count(i), exact(cf.quotients[i]), exact(c), format_double(static_cast<double>(err))});
    }
    return t;
}

inline Table construction_table(const ConstructionResult& r) {
    Table t{{"r", "k", "anchor", "seed", "backward_steps", "division_poor_steps", "segment_terms"}, {}};
    t.add({exact(r.r), exact(r.k), exact_list(r.forward_anchor), exact_list(r.seed), count(r.backward_steps),
           count(r.division_poor_steps), count(r.segment_terms)});
    return t;
}

/// One row per term of a constructed segment, with the exponent that produced it.
inline Table construction_terms_table(const ConstructionResult& r) {
    Table t{{"index", "term", "exponent"}, {}};
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        Field d = std::string{};
        if (i >= 4) {
            const Window w(r.terms[i - 4], r.terms[i - 3], r.terms[i - 2], r.terms[i - 1]);
            d = static_cast<std::int64_t>(step_forward(w).exponent);
        }
        t.add({count(i + 1), exact(r.terms[i]), d});
    }
    return t;
}

inline Table prediction_table(const LengthPrediction& p) {
    Table t{{"q", "predicted_bound"}, {}};
    t.add({exact(p.q), p.predicted_bound});
    return t;
}

/// Step records: index, exact value (empty in log-domain runs), log value, exponent.
inline Table trajectory_table(const ModelTrajectory& traj) {
    Table t{{"index", "value", "log_value", "exponent"}, {}};
    for (std::size_t i = 0; i < traj.log_values.size(); ++i) {
        Field v = std::string{};
        if (i < traj.values.size()) v = exact(traj.values[i]);
        Field d = std::string{};
        if (i >= 4) d = static_cast<std::int64_t>(traj.exponents[i - 4]);
        t.add({count(i), v, traj.log_values[i], d});
    }
    return t;
}

inline Table histogram_table(const Histogram& h) {
    Table t{{h.domain == Histogram::Domain::residue ? "residue" : "exponent", "count"}, {}};
    for (const auto& [cls, n] : h.counts) t.add({count(cls), count(n)});
    return t;
}

}  // namespace tetra
