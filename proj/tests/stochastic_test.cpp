#include <gtest/gtest.h>

#include <cmath>

#include "tetra/stochastic.hpp"

namespace tetra {
namespace {

// Replays a fixed list of 64-bit words.
struct ScriptedBits {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    std::vector<std::uint64_t> words;
    std::size_t next = 0;
    result_type operator()() { return words.at(next++); }
};

constexpr double log_alpha = 0.29938911919827547;  // mpmath

TEST(SampleExponent, CountsFlipsUpToFirstSuccess) {
    ScriptedBits bits{{1, 0b1000, 0, 0b100, 0, 0, 1}};
    EXPECT_EQ(sample_exponent(bits), 1u);
    EXPECT_EQ(sample_exponent(bits), 4u);
    EXPECT_EQ(sample_exponent(bits), 64u + 3u);
    EXPECT_EQ(sample_exponent(bits), 129u);
}

TEST(SampleExponent, Reproducible) {
    Engine a = make_engine(42), b = make_engine(42), c = make_engine(43), s1 = make_engine(42, 1);
    std::vector<unsigned> xa, xb, xc, xs;
    for (int i = 0; i < 1000; ++i) {
        xa.push_back(sample_exponent(a));
        xb.push_back(sample_exponent(b));
        xc.push_back(sample_exponent(c));
        xs.push_back(sample_exponent(s1));
    }
    EXPECT_EQ(xa, xb);
    EXPECT_NE(xa, xc);
    EXPECT_NE(xa, xs);
}

TEST(SampleExponent, GeometricLaw) {
    Engine rng = make_engine(default_rng_seed);
    constexpr int n = 1'000'000;
    std::uint64_t ones = 0, sum = 0;
    for (int i = 0; i < n; ++i) {
        const unsigned j = sample_exponent(rng);
        ones += (j == 1);
        sum += j;
    }
    const double freq1 = static_cast<double>(ones) / n;
    const double mean = static_cast<double>(sum) / n;
    EXPECT_GE(freq1, 0.498);
    EXPECT_LE(freq1, 0.502);
    EXPECT_NEAR(mean, 2.0, 0.01);
}

TEST(SimulateModel, ZeroStepsIsEmpty) {
    const auto run = simulate_model(Window(1, 1, 1, 1), 0, 7);
    EXPECT_TRUE(run.trajectory.values.empty());
    EXPECT_TRUE(run.trajectory.exponents.empty());
    EXPECT_FALSE(run.drift.has_value());
}

TEST(SimulateModel, ForcedDivideByFourHasZeroDrift) {
    const auto run = simulate_model_with(Window(1, 3, 5, 7), 1, [] { return 2u; });
    ASSERT_EQ(run.trajectory.values.size(), 5u);
    EXPECT_EQ(run.trajectory.values[4], Rational(4));
    EXPECT_EQ(*run.drift, 0);
}

TEST(SimulateModel, ExactStepsSatisfyRecurrenceAndDriftIdentity) {
    const auto run = simulate_model(Window(1, 3, 5, 7), 300, 99);
    const auto& v = run.trajectory.values;
    ASSERT_EQ(v.size(), 304u);
    Rational drift_sum = 0;
    for (std::size_t k = 0; k < 300; ++k) {
        const Rational s = v[k] + v[k + 1] + v[k + 2] + v[k + 3];
        const unsigned d = run.trajectory.exponents[k];
        EXPECT_EQ(v[k + 4] * Rational(BigInt(1) << d), s);
        const Rational contribution = (v[k + 4] - s / 4) / s;
        EXPECT_EQ(contribution, Rational(BigInt(1), BigInt(1) << d) - Rational(1, 4));
        drift_sum += contribution;
    }
    EXPECT_EQ(*run.drift, drift_sum / 300);
}

TEST(SimulateModel, LogDomainTracksExactValues) {
    const auto exact = simulate_model(Window(1, 3, 5, 7), 400, 5, ModelArithmetic::exact);
    const auto logd = simulate_model(Window(1, 3, 5, 7), 400, 5, ModelArithmetic::log_domain);
    EXPECT_EQ(exact.trajectory.exponents, logd.trajectory.exponents);
    EXPECT_TRUE(logd.trajectory.values.empty());
    ASSERT_EQ(exact.trajectory.log_values.size(), logd.trajectory.log_values.size());
    for (std::size_t i = 0; i < exact.trajectory.log_values.size(); ++i) {
        EXPECT_NEAR(exact.trajectory.log_values[i], logd.trajectory.log_values[i], 1e-9);
    }
    EXPECT_EQ(exact.drift, logd.drift);
}

TEST(SimulateModel, Determinism) {
    const auto a = simulate_model(Window(1, 1, 1, 1), 2000, 1234, ModelArithmetic::log_domain);
    const auto b = simulate_model(Window(1, 1, 1, 1), 2000, 1234, ModelArithmetic::log_domain);
    EXPECT_EQ(a.trajectory.exponents, b.trajectory.exponents);
    EXPECT_EQ(a.trajectory.log_values, b.trajectory.log_values);
    EXPECT_EQ(a.trajectory.rng_seed, 1234u);
}

TEST(SimulateModel, MillionStepDrift) {
    const auto run = simulate_model(Window(1, 1, 1, 1), 1'000'000, default_rng_seed, ModelArithmetic::log_domain);
    EXPECT_NEAR(run.drift_value(), 1.0 / 12.0, 0.003);
    const double freq1 = static_cast<double>(run.exponent_counts.at(1)) / 1e6;
    EXPECT_GE(freq1, 0.498);
    EXPECT_LE(freq1, 0.502);
}

TEST(GrowthEstimate, DeterministicModels) {
    const auto halving = simulate_model_with(Window(1, 1, 1, 1), 10000, [] { return 1u; }, ModelArithmetic::log_domain);
    EXPECT_NEAR(growth_estimate(halving.trajectory), log_alpha, 1e-3);

    const auto quartering = simulate_model_with(Window(1, 3, 5, 7), 10000, [] { return 2u; }, ModelArithmetic::log_domain);
    EXPECT_NEAR(growth_estimate(quartering.trajectory), 0.0, 1e-3);

    const auto exact_halving = simulate_model_with(Window(1, 1, 1, 1), 400, [] { return 1u; });
    EXPECT_NEAR(growth_estimate(exact_halving.trajectory), log_alpha, 1e-2);
}

TEST(GrowthEstimate, RequiresHundredTerms) {
    const auto run = simulate_model(Window(1, 1, 1, 1), 50, 1);
    EXPECT_THROW(growth_estimate(run.trajectory), InvalidInput);
    ModelTrajectory degenerate;
    degenerate.log_values.assign(200, 0.0);
    degenerate.log_values[17] = -INFINITY;
    EXPECT_THROW(growth_estimate(degenerate), std::domain_error);
}

TEST(Ensemble, ThreadCountDoesNotChangeResults) {
    ParallelOptions four;
    four.threads = 4;
    const auto serial = simulate_ensemble(Window(1, 1, 1, 1), 5000, 6, 77);
    const auto parallel = simulate_ensemble(Window(1, 1, 1, 1), 5000, 6, 77, four);
    ASSERT_EQ(serial.size(), 6u);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].stream, i);
        EXPECT_EQ(serial[i].drift, parallel[i].drift);
        EXPECT_EQ(serial[i].growth, parallel[i].growth);
    }
    // Stream 0 of the ensemble is the single-run stream.
    const auto single = simulate_model(Window(1, 1, 1, 1), 5000, 77, ModelArithmetic::log_domain);
    EXPECT_EQ(*single.drift, serial[0].drift);
}

// Golden counts from tests/oracles/brute_force.py.
TEST(ResidueSurvey, BoundFourGolden) {
    const auto h = residue_survey(4, 10, 8);
    EXPECT_EQ(h.total, 160u);
    const std::map<std::uint64_t, std::uint64_t> expected{{0, 0}, {1, 78}, {2, 0}, {3, 74},
                                                          {4, 0}, {5, 4},  {6, 0}, {7, 4}};
    EXPECT_EQ(h.counts, expected);
}

TEST(ResidueSurvey, EvenClassesEmptyAndShardIndependent) {
    ParallelOptions three;
    three.threads = 3;
    const auto serial = residue_survey(8, 60, 16);
    EXPECT_EQ(residue_survey(8, 60, 16, three), serial);
    std::uint64_t sum = 0;
    for (const auto& [cls, n] : serial.counts) {
        if (cls % 2 == 0) EXPECT_EQ(n, 0u);
        sum += n;
    }
    EXPECT_EQ(sum, serial.total);
    EXPECT_EQ(serial.total, 256u * 60u);
}

TEST(ResidueSurvey, ParameterValidation) {
    EXPECT_THROW(residue_survey(4, 10, 12), InvalidInput);
    EXPECT_THROW(residue_survey(4, 10, 1), InvalidInput);
    EXPECT_THROW(residue_survey(1, 10, 8), InvalidInput);
    EXPECT_THROW(residue_survey(4, 3, 8), InvalidInput);
}

TEST(ExponentSurvey, BoundFourGolden) {
    const auto h = exponent_survey(4, 10);
    EXPECT_EQ(h.total, 96u);
    const std::map<std::uint64_t, std::uint64_t> expected{{1, 38}, {2, 18}, {3, 39}, {4, 1}};
    EXPECT_EQ(h.counts, expected);
}

TEST(ExponentSurvey, ConstantSeedFirstStep) {
    const auto h = exponent_survey(2, 5);
    EXPECT_EQ(h.total, 1u);
    EXPECT_EQ(h.count(2), 1u);
    ParallelOptions two;
    two.threads = 2;
    EXPECT_EQ(exponent_survey(8, 80, two), exponent_survey(8, 80));
}

}  // namespace
}  // namespace tetra
