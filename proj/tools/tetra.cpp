// tetra: command-line front end for the 2-free Tetranacci toolkit.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 internal or output error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tetra/tetra.hpp"

namespace {

using namespace tetra;

struct RunConfig {
    std::string format = "csv";
    std::string output;
    unsigned threads = 1;
    bool quiet = false;

    std::string seed = "1,1,1,1";
    std::size_t terms = 10;
    std::size_t max_steps = 10000;
    std::string cap = "1e100";
    std::string detector = "hash";
    std::uint64_t bound = desk_scale_bound;
    bool long_running = false;
    std::string cycle;
    std::string tolerance = "1e-16";
    std::string r;
    std::string q;
    std::size_t steps = 1000;
    std::size_t runs = 1;
    std::uint64_t rng_seed = default_rng_seed;
    bool exact_model = false;
    bool emit_trajectory = false;
    bool emit_terms = false;
    std::uint64_t modulus = 32;
};

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json" || s == "jsonl") return Format::jsonl;
    throw InvalidInput("unknown format '" + s + "' (expected csv or json)");
}

std::optional<BigInt> parse_cap(const std::string& s) {
    if (s == "none") return std::nullopt;
    const Rational cap = parse_rational(s);
    if (denominator(cap) != 1 || cap < 1) throw InvalidInput("value cap must be a positive integer or 'none'");
    return numerator(cap);
}

CycleDetector parse_detector(const std::string& s) {
    if (s == "hash") return CycleDetector::hash_table;
    if (s == "brent") return CycleDetector::brent;
    throw InvalidInput("unknown detector '" + s + "' (expected hash or brent)");
}

std::vector<BigInt> parse_list(const std::string& s) {
    std::vector<BigInt> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(parse_bigint(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void require_desk_scale(const RunConfig& cfg) {
    if (cfg.bound > desk_scale_bound && !cfg.long_running) {
        throw InvalidInput("bound " + std::to_string(cfg.bound) + " exceeds " + std::to_string(desk_scale_bound) +
                           "; pass --long-running to confirm a multi-hour run");
    }
}

ParallelOptions parallel_options(const RunConfig& cfg) {
    ParallelOptions opts;
    opts.threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    if (!cfg.quiet) {
        opts.progress = [last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
            const std::size_t pct = done * 100 / total;
            if (pct / 10 != last / 10 || done == total) {
                std::cerr << "progress: " << done << "/" << total << " shards\n";
                last = pct;
            }
        };
    }
    return opts;
}

/// Writes one table, to a file when --output is given and to stdout otherwise.
class Sink {
public:
    explicit Sink(const RunConfig& cfg) : format_(parse_format(cfg.format)) {
        if (!cfg.output.empty()) {
            file_.open(cfg.output, std::ios::binary | std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
        }
    }

    void write(const Table& t) { export_table(t, format_, file_.is_open() ? file_ : std::cout); }

private:
    Format format_;
    std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // Each subcommand validates its parameters and stores the work to do here.
    std::function<std::function<void(Sink&)>()> plan;

    CLI::App app{"2-free Tetranacci sequences: generation, cycles, division-poor seeds, growth model"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", cfg.format, "Output format: csv or json (JSON lines)")
        ->check(CLI::IsMember({"csv", "json", "jsonl"}));
    app.add_option("-o,--output", cfg.output, "Write records to this file instead of stdout");
    app.add_option("--threads", cfg.threads, "Worker threads for surveys and searches (0 = all cores)");
    app.add_flag("--quiet", cfg.quiet, "Suppress progress messages on stderr");

    auto* generate_cmd = app.add_subcommand("generate", "Generate terms from a seed");
    generate_cmd->add_option("--seed", cfg.seed, "Four odd positive terms, a,b,c,d")->required();
    generate_cmd->add_option("--terms", cfg.terms, "Number of terms to generate after the seed");
    generate_cmd->callback([&] {
        plan = [&] {
            const Window seed = parse_window(cfg.seed);
            return [seed, n = cfg.terms](Sink& out) { out.write(sequence_table(generate(seed, n))); };
        };
    });

    auto* classify_cmd = app.add_subcommand("classify", "Classify a trajectory as periodic or unresolved");
    classify_cmd->add_option("--seed", cfg.seed, "Four odd positive terms, a,b,c,d")->required();
    classify_cmd->add_option("--max-steps", cfg.max_steps, "Step budget")->check(CLI::PositiveNumber);
    classify_cmd->add_option("--cap", cfg.cap, "Stop once a term exceeds this value ('none' disables)");
    classify_cmd->add_option("--detector", cfg.detector, "Cycle detector: hash or brent");
    classify_cmd->callback([&] {
        plan = [&] {
            const Window seed = parse_window(cfg.seed);
            const auto cap = parse_cap(cfg.cap);
            const auto det = parse_detector(cfg.detector);
            return [seed, cap, det, steps = cfg.max_steps](Sink& out) {
                out.write(classification_table(seed, classify(seed, steps, cap, det)));
            };
        };
    });

    auto* search_cmd = app.add_subcommand("search", "Census of cycles reached from every seed below a bound");
    search_cmd->add_option("--bound", cfg.bound, "Seeds have odd terms in (0, bound)")->check(CLI::Range(2, 1 << 20));
    search_cmd->add_option("--max-steps", cfg.max_steps, "Step budget per seed")->check(CLI::PositiveNumber);
    search_cmd->add_option("--cap", cfg.cap, "Value cap per trajectory ('none' disables)");
    search_cmd->add_option("--detector", cfg.detector, "Cycle detector: hash or brent");
    search_cmd->add_flag("--long-running", cfg.long_running, "Allow bounds above the desk-scale default");
    search_cmd->callback([&] {
        plan = [&] {
            require_desk_scale(cfg);
            const auto cap = parse_cap(cfg.cap);
            const auto det = parse_detector(cfg.detector);
            return [&cfg, cap, det](Sink& out) {
                const CycleCensus census = period_search(cfg.bound, cfg.max_steps, cap, parallel_options(cfg), det);
                out.write(census_table(census));
                if (!cfg.quiet) {
                    std::cerr << "seeds " << census.seed_count << ", unresolved " << census.unresolved
                              << " (cap exceeded " << census.cap_exceeded << "), distinct cycles "
                              << census.basins.size() << "\n";
                }
            };
        };
    });

    auto* drift_cmd = app.add_subcommand("drift", "Exact mean drift around a cycle");
    drift_cmd->add_option("--cycle", cfg.cycle, "One period of the cycle, comma separated")->required();
    drift_cmd->callback([&] {
        plan = [&] {
            auto cycle = parse_list(cfg.cycle);
            const Rational drift = cycle_drift(cycle);
            return [cycle, drift](Sink& out) { out.write(drift_table(cycle, drift)); };
        };
    });

    auto* alpha_cmd = app.add_subcommand("alpha", "Bracket the positive root of 2x^4 - x^3 - x^2 - x - 1");
    alpha_cmd->add_option("--tolerance", cfg.tolerance, "Bracket width, e.g. 1e-16 or 1/1000");
    alpha_cmd->callback([&] {
        plan = [&] {
            const Rational tol = parse_rational(cfg.tolerance);
            if (tol <= 0) throw InvalidInput("tolerance must be positive");
            return [tol](Sink& out) { out.write(alpha_table(isolate_alpha(tol))); };
        };
    });

    auto* cf_cmd = app.add_subcommand("cf", "Certified continued fraction of alpha with convergents");
    cf_cmd->add_option("--terms", cfg.terms, "Number of partial quotients")->check(CLI::PositiveNumber);
    cf_cmd->callback([&] {
        plan = [&] { return [n = cfg.terms](Sink& out) { out.write(continued_fraction_table(continued_fraction_of_alpha(n))); }; };
    });

    auto* divpoor_cmd = app.add_subcommand("divpoor", "Initially division-poor sequences");
    divpoor_cmd->require_subcommand(1);
    auto* construct_cmd = divpoor_cmd->add_subcommand("construct", "Build a seed by backward recursion from r = p/q");
    construct_cmd->add_option("--r", cfg.r, "Rational approximation p/q of alpha, p/q > 1")->required();
    construct_cmd->add_flag("--emit-terms", cfg.emit_terms, "Emit every term of the segment instead of the summary");
    construct_cmd->callback([&] {
        plan = [&] {
            const Rational r = parse_rational(cfg.r);
            if (r <= 1) throw InvalidInput("r must exceed 1");
            return [r, terms = cfg.emit_terms](Sink& out) {
                const auto res = construct(r);
                out.write(terms ? construction_terms_table(res) : construction_table(res));
            };
        };
    });
    auto* measure_cmd = divpoor_cmd->add_subcommand("measure", "Count leading steps that divide by exactly 2");
    measure_cmd->add_option("--seed", cfg.seed, "Four odd positive terms, a,b,c,d")->required();
    measure_cmd->add_option("--max-steps", cfg.max_steps, "Step budget")->check(CLI::PositiveNumber);
    measure_cmd->callback([&] {
        plan = [&] {
            const Window seed = parse_window(cfg.seed);
            return [seed, steps = cfg.max_steps](Sink& out) {
                Table t{{"seed", "division_poor_steps", "segment_terms"}, {}};
                const auto n = measure_division_poor(seed, steps);
                t.add({exact_list(seed), count(n), count(n + 4)});
                out.write(t);
            };
        };
    });
    auto* predict_cmd = divpoor_cmd->add_subcommand("predict", "Heuristic division-poor length for denominator q");
    predict_cmd->add_option("--q", cfg.q, "Denominator q >= 2")->required();
    predict_cmd->callback([&] {
        plan = [&] {
            const BigInt q = parse_bigint(cfg.q);
            if (q < 2) throw InvalidInput("q must be at least 2");
            return [q](Sink& out) { out.write(prediction_table(predict_length(q))); };
        };
    });

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of the geometric-exponent growth model");
    simulate_cmd->add_option("--seed", cfg.seed, "Starting window, a,b,c,d");
    simulate_cmd->add_option("--steps", cfg.steps, "Model steps per run");
    simulate_cmd->add_option("--runs", cfg.runs, "Independent runs on streams 0..runs-1")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--rng-seed", cfg.rng_seed, "Master seed (default 20160521)");
    simulate_cmd->add_flag("--exact", cfg.exact_model, "Keep exact rational values (short runs only)");
    simulate_cmd->add_flag("--trajectory", cfg.emit_trajectory, "Emit step records instead of the summary");
    simulate_cmd->callback([&] {
        plan = [&] {
            const Window start = parse_window(cfg.seed);
            if (cfg.runs > 1 && (cfg.emit_trajectory || cfg.exact_model)) {
                throw InvalidInput("--trajectory and --exact apply to single runs only");
            }
            if (cfg.runs > 1 || !cfg.emit_trajectory) {
                if (cfg.steps < 100) throw InvalidInput("summaries need at least 100 steps");
            }
            return [&cfg, start](Sink& out) {
                if (cfg.runs > 1) {
                    Table t{{"stream", "steps", "drift", "drift_value", "growth"}, {}};
                    for (const auto& s : simulate_ensemble(start, cfg.steps, cfg.runs, cfg.rng_seed, parallel_options(cfg))) {
                        t.add({count(s.stream), count(cfg.steps), exact(s.drift), static_cast<double>(s.drift),
                               s.growth});
                    }
                    out.write(t);
                    return;
                }
                const auto arithmetic = cfg.exact_model ? ModelArithmetic::exact : ModelArithmetic::log_domain;
                const ModelRun run = simulate_model(start, cfg.steps, cfg.rng_seed, arithmetic);
                if (cfg.emit_trajectory) {
                    out.write(trajectory_table(run.trajectory));
                    return;
                }
                Table t{{"rng_seed", "steps", "drift", "drift_value", "freq_d1", "growth"}, {}};
                const double freq1 =
                    static_cast<double>(run.exponent_counts.count(1) ? run.exponent_counts.at(1) : 0) / cfg.steps;
                t.add({exact(BigInt(cfg.rng_seed)), count(cfg.steps), exact(*run.drift), run.drift_value(), freq1,
                       growth_estimate(run.trajectory)});
                out.write(t);
            };
        };
    });

    auto* survey_cmd = app.add_subcommand("survey", "Empirical surveys over every seed below a bound");
    survey_cmd->require_subcommand(1);
    auto* residues_cmd = survey_cmd->add_subcommand("residues", "Histogram of term residues");
    auto* exponents_cmd = survey_cmd->add_subcommand("exponents", "Histogram of division exponents");
    for (auto* sub : {residues_cmd, exponents_cmd}) {
        sub->add_option("--bound", cfg.bound, "Seeds have odd terms in (0, bound)")->check(CLI::Range(2, 1 << 20));
        sub->add_option("--terms", cfg.terms, "Terms per seed, seed included")->check(CLI::Range(4, 1 << 30));
        sub->add_flag("--long-running", cfg.long_running, "Allow bounds above the desk-scale default");
    }
    residues_cmd->add_option("--modulus", cfg.modulus, "Power of two");
    residues_cmd->callback([&] {
        plan = [&] {
            require_desk_scale(cfg);
            if (cfg.modulus < 2 || (cfg.modulus & (cfg.modulus - 1)) != 0) {
                throw InvalidInput("modulus must be a power of two");
            }
            return [&cfg](Sink& out) {
                out.write(histogram_table(residue_survey(cfg.bound, cfg.terms, cfg.modulus, parallel_options(cfg))));
            };
        };
    });
    exponents_cmd->callback([&] {
        plan = [&] {
            require_desk_scale(cfg);
            return [&cfg](Sink& out) {
                out.write(histogram_table(exponent_survey(cfg.bound, cfg.terms, parallel_options(cfg))));
            };
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 1;
    }

    std::function<void(Sink&)> work;
    try {
        if (cfg.threads > 4096) throw InvalidInput("thread count is unreasonably large");
        parse_format(cfg.format);
        work = plan();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        Sink sink(cfg);
        work(sink);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
