#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include "wallscale/output.hpp"
#include "wallscale/synthetic.hpp"

using namespace wallscale;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("wallscale_out_" + name);
    fs::remove_all(dir);
    return dir;
}

BatchSummary one_run_summary() {
    const std::vector<VelocityProfile> p{generate(
        {scaling_two_segment(10.0, 1000.0), {100, 20000, 100}, 0.0, 0, 0.0, synthetic_metadata("solo", 20000)})};
    return analyze_profiles(p);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

double attr(const std::string& tag, const std::string& name) {
    const std::regex re(name + "=\"([-0-9.eE+]+)\"");
    std::smatch m;
    if (!std::regex_search(tag, m, re)) throw std::runtime_error("missing " + name);
    return std::stod(m[1]);
}

}  // namespace

TEST(Emit, EmptyFormatSetWritesNothing) {
    const auto dir = scratch("empty");
    EXPECT_TRUE(emit_outputs(one_run_summary(), dir, {}).empty());
    EXPECT_FALSE(fs::exists(dir));
}

TEST(Emit, TableCsvSchema) {
    const auto dir = scratch("csv");
    const auto written = emit_outputs(one_run_summary(), dir, {OutputFormat::table_csv});
    ASSERT_EQ(written.size(), 1u);
    const auto rows = lines(slurp(dir / "table.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0],
              "label,re_theta,a_amplitude,alpha,b2_amplitude,beta,kappa_fit,b_fit,ln_re1,ln_re2,"
              "discrepancy_pct,re_eff,lambda_scale,theta_over_lambda,sse_power_region1,"
              "sse_loglaw_region1,breakpoint_y_plus,gamma_mean,gamma_std,close_enough,"
              "rms_power_region1,rms_loglaw_region1");
    EXPECT_EQ(rows[1].substr(0, 11), "solo,20000,");
    EXPECT_EQ(std::count(rows[1].begin(), rows[1].end(), ','), 21);
}

TEST(Emit, JsonMirrorsReportFields) {
    const auto s = one_run_summary();
    const auto j = summary_to_json(s);
    ASSERT_EQ(j["runs"].size(), 1u);
    std::size_t i = 0;
    for (const auto& [key, value] : j["runs"][0].items()) {
        if (key == "warnings") continue;
        EXPECT_EQ(key, kTableColumns[i++]);
    }
    EXPECT_EQ(i, kTableColumns.size());
    EXPECT_TRUE(j["runs"][0]["theta_over_lambda"].is_null());
    EXPECT_EQ(j["beta_vs_inverse_ln_re"]["status"], "insufficient runs");
    EXPECT_NEAR(j["runs"][0]["ln_re1"].get<double>(), 10.0, 1e-9);
}

TEST(Emit, TenSignificantDigits) {
    EXPECT_EQ(detail::fmt10(std::exp(10.0)), "22026.46579");
    EXPECT_EQ(detail::fmt10(1.0 / 3.0), "0.3333333333");
    EXPECT_EQ(detail::round10(1.0 / 3.0), 0.3333333333);
}

TEST(Emit, CollapseSvgPointsLieOnDrawnBisectrix) {
    const auto s = one_run_summary();
    std::stringstream out;
    write_collapse_svg(s, out);
    const std::string svg = out.str();

    const std::regex line_re("<line class=\"bisectrix\"[^>]*>");
    std::smatch lm;
    ASSERT_TRUE(std::regex_search(svg, lm, line_re));
    const std::string tag = lm[0];
    const double x1 = attr(tag, "x1"), y1 = attr(tag, "y1"), x2 = attr(tag, "x2"), y2 = attr(tag, "y2");

    const std::regex pt_re("<circle class=\"pt\"[^>]*>");
    std::size_t n = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pt_re); it != std::sregex_iterator(); ++it) {
        const std::string c = (*it)[0];
        const double cx = attr(c, "cx"), cy = attr(c, "cy");
        const double dist = std::abs((y2 - y1) * cx - (x2 - x1) * cy + x2 * y1 - y2 * x1) /
                            std::hypot(y2 - y1, x2 - x1);
        EXPECT_LE(dist, 0.5);
        ++n;
    }
    EXPECT_EQ(n, s.runs[0].collapse.size());
}

TEST(Emit, CollapseSvgOffDiagonalPointsAreDetected) {
    auto s = one_run_summary();
    for (auto& c : s.runs[0].collapse) c.psi += 0.5;
    std::stringstream out;
    write_collapse_svg(s, out);
    const std::string svg = out.str();
    std::smatch lm;
    ASSERT_TRUE(std::regex_search(svg, lm, std::regex("<line class=\"bisectrix\"[^>]*>")));
    const std::string tag = lm[0];
    const double x1 = attr(tag, "x1"), y1 = attr(tag, "y1"), x2 = attr(tag, "x2"), y2 = attr(tag, "y2");
    std::smatch cm;
    ASSERT_TRUE(std::regex_search(svg, cm, std::regex("<circle class=\"pt\"[^>]*>")));
    const std::string c = cm[0];
    const double dist = std::abs((y2 - y1) * attr(c, "cx") - (x2 - x1) * attr(c, "cy") + x2 * y1 - y2 * x1) /
                        std::hypot(y2 - y1, x2 - x1);
    EXPECT_GT(dist, 5.0);
}

TEST(Emit, ProfileSvgHasSegmentsAndReferenceLine) {
    const auto dir = scratch("svg");
    const auto s = one_run_summary();
    const auto written = emit_outputs(s, dir, {OutputFormat::profile_svg, OutputFormat::collapse_svg,
                                               OutputFormat::collapse_csv});
    ASSERT_EQ(written.size(), 3u);
    const std::string svg = slurp(dir / "profile_000_solo.svg");
    EXPECT_NE(svg.find("class=\"region1\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"region2\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"breakpoint\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"yplus200\""), std::string::npos);

    // The y+ = 200 line sits at lg 200 on the plot's x axis.
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, std::regex("<line class=\"yplus200\"[^>]*>")));
    const auto pts = s.runs[0].profile.points();
    const double lo = std::log10(100.0), hi = std::log10(20000.0), pad = 0.05 * (hi - lo);
    const PlotFrame f{lo - pad, hi + pad, 0, 1};
    EXPECT_NEAR(attr(m[0], "x1"), f.px(std::log10(200.0)), 1e-3);
    EXPECT_EQ(pts.size(), 100u);

    const auto csv = lines(slurp(dir / "collapse.csv"));
    EXPECT_EQ(csv[0], "ln_y_plus,psi,run_label");
    EXPECT_EQ(csv.size(), s.runs[0].collapse.size() + 1);
}

TEST(Emit, ComparisonTableListsReferences) {
    std::stringstream out;
    write_comparison_csv(one_run_summary().reports(), out);
    const auto rows = lines(out.str());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(rows[0].find("dkappa_nikuradze,db_nikuradze"), std::string::npos);
    EXPECT_NE(rows[0].find("dkappa_thesis_2000"), std::string::npos);
    EXPECT_NE(rows[1].find(",power,"), std::string::npos);
}

TEST(Emit, UnwritableDirectoryIsReported) {
    const auto file = fs::temp_directory_path() / "wallscale_out_blocker";
    std::ofstream(file) << "x";
    EXPECT_THROW(emit_outputs(one_run_summary(), file / "sub", {OutputFormat::table_csv}), Error);
}

TEST(Emit, ByteIdenticalAcrossRepeats) {
    const auto a = scratch("rep_a"), b = scratch("rep_b");
    const std::set<OutputFormat> all{OutputFormat::table_csv, OutputFormat::table_json,
                                     OutputFormat::collapse_csv, OutputFormat::collapse_svg};
    emit_outputs(one_run_summary(), a, all);
    emit_outputs(one_run_summary(), b, all);
    for (const char* f : {"table.csv", "table.json", "collapse.csv", "collapse.svg"})
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}
