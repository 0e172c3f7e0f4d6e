#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "wallscale/ingest.hpp"

using namespace wallscale;

namespace {

const char* kHeader =
    "# label = run-7\n"
    "# re_theta = 20000\n"
    "# u_free = 15\n"
    "# u_tau = 0.5\n"
    "# nu = 1.5e-05\n"
    "\n";

std::string rows(int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += std::to_string(100 + 20 * i) + "\t" + std::to_string(15.0 + 0.2 * i) + "\n";
    return s;
}

}  // namespace

TEST(Ingest, ParsesCanonicalFile) {
    const auto p = parse_profile(std::string(kHeader) + rows(12), ProfileFormat::canonical);
    EXPECT_EQ(p.size(), 12u);
    EXPECT_EQ(p.meta().label, "run-7");
    EXPECT_EQ(p.meta().re_theta, 20000.0);
    EXPECT_EQ(p.meta().nu, 1.5e-5);
    EXPECT_FALSE(p.meta().momentum_thickness.has_value());
    EXPECT_EQ(p.points()[1].y_plus, 120.0);
}

TEST(Ingest, ThreeRowsFailTheMinimumPointsInvariant) {
    try {
        parse_profile(std::string(kHeader) + rows(3), ProfileFormat::canonical);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("minimum-points"), std::string::npos);
    }
}

TEST(Ingest, NegativeVelocityIsAParseErrorWithLine) {
    const std::string text = std::string(kHeader) + rows(4) + "50.0  -3.2\n" + rows(8);
    try {
        parse_profile(text, ProfileFormat::canonical);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(std::string(e.what()), "u_plus must be positive, line 11");
        EXPECT_EQ(e.line(), 11u);
    }
}

TEST(Ingest, MalformedRows) {
    EXPECT_THROW(parse_profile(std::string(kHeader) + "100\tabc\n" + rows(12), ProfileFormat::canonical),
                 ParseError);
    EXPECT_THROW(parse_profile(std::string(kHeader) + "100\n" + rows(12), ProfileFormat::canonical),
                 ParseError);
    EXPECT_THROW(parse_profile(std::string(kHeader) + "100 1 2\n" + rows(12), ProfileFormat::canonical),
                 ParseError);
    EXPECT_THROW(parse_profile(std::string(kHeader) + "nan 3\n" + rows(12), ProfileFormat::canonical),
                 ParseError);
}

TEST(Ingest, NonMonotoneIsAValidationError) {
    const std::string text = std::string(kHeader) + "200\t16\n" + rows(12);
    try {
        parse_profile(text, ProfileFormat::canonical);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("strictly increasing"), std::string::npos);
    }
}

TEST(Ingest, MissingMetadataListsEveryAbsentKey) {
    try {
        parse_profile("# label = x\n# nu = 1e-5\n\n" + rows(12), ProfileFormat::canonical);
        FAIL();
    } catch (const MissingMetadataError& e) {
        EXPECT_EQ(e.keys(), (std::vector<std::string>{"re_theta", "u_free", "u_tau"}));
    }
}

TEST(Ingest, CommentsAfterHeaderAreIgnored) {
    std::string tail;
    for (int i = 0; i < 6; ++i) tail += std::to_string(1000 + 50 * i) + "\t20\n";
    const auto p = parse_profile(std::string(kHeader) + rows(6) + "# re_theta = 1\n# note\n" + tail,
                                 ProfileFormat::canonical);
    EXPECT_EQ(p.meta().re_theta, 20000.0);
    EXPECT_EQ(p.size(), 12u);
}

TEST(Ingest, DimensionalUnitsAreConverted) {
    std::string text =
        "# re_theta = 20000\n# u_free = 15\n# u_tau = 0.5\n# nu = 1.5e-05\n# units = dimensional\n\n";
    for (int i = 1; i <= 10; ++i) text += std::to_string(0.001 * i) + " " + std::to_string(8 + 0.1 * i) + "\n";
    const auto p = parse_profile(text, ProfileFormat::canonical);
    EXPECT_NEAR(p.points()[0].y_plus, 0.5 * 0.001 / 1.5e-5, 1e-9);
    EXPECT_NEAR(p.points()[0].u_plus, 8.1 / 0.5, 1e-12);
}

TEST(Ingest, WhitespaceTableTakesMetadataFromCaller) {
    std::string text = "# exported by rig\n";
    for (int i = 0; i < 12; ++i) text += "  " + std::to_string(100 + 30 * i) + "   " + std::to_string(14 + 0.3 * i) + "  0.01\n";
    EXPECT_THROW(parse_profile(text, ProfileFormat::whitespace_table), MissingMetadataError);
    const MetadataMap meta{{"re_theta", "12000"}, {"u_free", "10"}, {"u_tau", "0.4"}, {"nu", "1.5e-5"},
                           {"label", "raw"}};
    const auto p = parse_profile(text, ProfileFormat::whitespace_table, meta);
    EXPECT_EQ(p.size(), 12u);
    EXPECT_EQ(p.meta().label, "raw");
    EXPECT_EQ(p.meta().re_theta, 12000.0);
}

TEST(Ingest, OverridesReplaceHeaderValues) {
    const auto p = parse_profile(std::string(kHeader) + rows(12), ProfileFormat::canonical,
                                 {{"re_theta", "25000"}});
    EXPECT_EQ(p.meta().re_theta, 25000.0);
}

TEST(Ingest, WriterEmitsDocumentedLayout) {
    const auto p = parse_profile(std::string(kHeader) + rows(10), ProfileFormat::canonical);
    const std::string out = write_profile(p);
    EXPECT_EQ(out.substr(0, out.find("\n\n") + 2),
              "# label = run-7\n# re_theta = 20000\n# u_free = 15\n# u_tau = 0.5\n"
              "# nu = 1.5e-05\n# units = wall\n\n");
    EXPECT_NE(out.find("\n100\t15\n"), std::string::npos);
}

// Property: parse(write(p)) == p for random valid profiles, metadata exact.
TEST(Ingest, RoundTripIsIdentity) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> step(0.01, 0.3), u(1.0, 40.0), pos(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        RunMetadata m;
        m.label = "trial " + std::to_string(trial);
        m.u_free = pos(rng);
        m.nu = 1e-6 * pos(rng);
        m.u_tau = 0.1 * pos(rng);
        m.re_theta = 1000 * pos(rng);
        if (trial % 2) m.momentum_thickness = m.re_theta * m.nu / m.u_free;
        std::vector<ProfilePoint> pts;
        double y = pos(rng);
        for (int i = 0; i < 10 + trial % 50; ++i) {
            y *= std::exp(step(rng));
            pts.push_back({y, u(rng)});
        }
        const auto p = VelocityProfile::from_wall_units(m, pts);
        const auto back = parse_profile(write_profile(p), ProfileFormat::canonical);
        ASSERT_EQ(back, p) << "trial " << trial;
    }
}
