#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wallscale/regression.hpp"
#include "wallscale/synthetic.hpp"

using namespace wallscale;

namespace {

GeneratorSpec spec_for(GeneratorModel model, double noise = 0.0, std::uint64_t seed = 0) {
    return GeneratorSpec{model, {100, 5000, 40}, noise, seed, 0.0, synthetic_metadata("syn", 20000)};
}

}  // namespace

TEST(NormalStream, FirstDeviatesArePinned) {
    // mt19937_64 default-seed check value (10000th output) from the standard.
    std::mt19937_64 ref;
    ref.discard(9999);
    EXPECT_EQ(ref(), 9981545732273789042ULL);

    NormalStream a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(NormalStream, UniformsAreOpenInterval) {
    NormalStream s(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(NormalStream, InverseCdfMoments) {
    NormalStream s(99);
    double sum = 0, sum_sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = s.normal();
        sum += g;
        sum_sq += g * g;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum_sq / n, 1.0, 0.01);
}

TEST(Generate, ScalingLawRoundTrip) {
    const auto p = generate(spec_for(ScalingLawModel{9.0}));
    EXPECT_EQ(p.size(), 40u);
    EXPECT_DOUBLE_EQ(p.y_plus_min(), 100.0);
    EXPECT_DOUBLE_EQ(p.y_plus_max(), 5000.0);
    const auto f = fit_power_law(p, {100, 5000});
    EXPECT_NEAR(f.amplitude, 7.6962, 1e-4);
    EXPECT_NEAR(f.amplitude, 9.0 / std::sqrt(3.0) + 2.5, 1e-10);
    EXPECT_NEAR(f.exponent, 1.0 / 6.0, 1e-10);
}

TEST(Generate, NoiselessIgnoresSeed) {
    EXPECT_EQ(generate(spec_for(ScalingLawModel{9.0}, 0.0, 1)), generate(spec_for(ScalingLawModel{9.0}, 0.0, 2)));
}

TEST(Generate, DeterministicWithNoise) {
    const auto a = generate(spec_for(LogLawModel{0.4, 5.1}, 1.0, 77));
    const auto b = generate(spec_for(LogLawModel{0.4, 5.1}, 1.0, 77));
    const auto c = generate(spec_for(LogLawModel{0.4, 5.1}, 1.0, 78));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Generate, TwoSegmentContinuity) {
    const TwoSegmentModel m{8.0, 0.16, 500.0, 0.10};
    EXPECT_NEAR(m.region2_amplitude(), std::exp(std::log(8.0) + 0.06 * std::log(500.0)), 1e-12);
    EXPECT_NEAR(m.region2_amplitude(), 11.615, 1e-3);
    const auto p = generate(spec_for(m));
    bool has_break = false;
    for (const auto& pt : p.points())
        if (pt.y_plus == 500.0) {
            has_break = true;
            EXPECT_NEAR(pt.u_plus, 8.0 * std::pow(500.0, 0.16), 1e-12);
            EXPECT_NEAR(pt.u_plus, m.region2_amplitude() * std::pow(500.0, 0.10), 1e-12);
        }
    EXPECT_TRUE(has_break);
    EXPECT_EQ(p.size(), 40u);
}

TEST(Generate, JitterKeepsOrderAndEndpoints) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorSpec s{TwoSegmentModel{8.0, 0.16, 500.0, 0.10}, {100, 10000, 60}, 0.0, seed, 0.9,
                        synthetic_metadata("j", 1e4)};
        const auto p = generate(s);  // construction checks strict ordering
        EXPECT_EQ(p.y_plus_min(), 100.0);
        EXPECT_EQ(p.y_plus_max(), 10000.0);
    }
}

TEST(Generate, SpecValidation) {
    auto s = spec_for(ScalingLawModel{9.0});
    s.grid.count = 9;
    EXPECT_THROW(generate(s), ValidationError);
    s = spec_for(ScalingLawModel{9.0});
    s.grid = {500, 100, 20};
    EXPECT_THROW(generate(s), ValidationError);
    s = spec_for(ScalingLawModel{9.0}, -1.0);
    EXPECT_THROW(generate(s), ValidationError);
    EXPECT_THROW(generate(spec_for(ScalingLawModel{0.0})), ValidationError);
    EXPECT_THROW(generate(spec_for(LogLawModel{0.0, 5.0})), ValidationError);
    EXPECT_THROW(generate(spec_for(TwoSegmentModel{8.0, 0.16, 50000.0, 0.1})), ValidationError);
}

// Property: noiseless generate -> fit recovers parameters across a sweep.
TEST(Generate, NoiselessSweepRoundTrips) {
    for (double ln_re = 6.0; ln_re <= 13.0; ln_re += 0.5) {
        const auto f = fit_power_law(generate(spec_for(ScalingLawModel{ln_re})), {100, 5000});
        EXPECT_LE(std::abs(f.amplitude / scaling_amplitude(ln_re) - 1), 1e-9);
        EXPECT_LE(std::abs(f.exponent / scaling_exponent(ln_re) - 1), 1e-9);
    }
    for (double kappa = 0.35; kappa <= 0.45 + 1e-12; kappa += 0.01) {
        const auto f = fit_log_law(generate(spec_for(LogLawModel{kappa, 5.0})), {100, 5000});
        EXPECT_LE(std::abs(f.kappa / kappa - 1), 1e-9);
        EXPECT_LE(std::abs(f.intercept_b / 5.0 - 1), 1e-9);
    }
}

// Property: noise is unbiased in log space.
TEST(Generate, NoiseIsUnbiased) {
    const int runs = 1000;
    double sum = 0, sum_sq = 0;
    for (int seed = 0; seed < runs; ++seed) {
        const auto f = fit_power_law(generate(spec_for(ScalingLawModel{10.0}, 1.0, seed)), {100, 5000});
        sum += f.exponent;
        sum_sq += f.exponent * f.exponent;
    }
    const double mean = sum / runs;
    const double sd = std::sqrt((sum_sq - runs * mean * mean) / (runs - 1));
    EXPECT_LT(std::abs(mean - 0.15), 3 * sd / std::sqrt(double(runs)));
}
