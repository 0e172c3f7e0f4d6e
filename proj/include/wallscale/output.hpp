#pragma once

/*
 * Report emission: per-run table (CSV/JSON), collapse dataset (CSV), and
 * SVG plots. All numbers are printed with 10 significant digits so that
 * identical inputs give byte-identical files.
 *
 * Table column order:
 *   label, re_theta, a_amplitude, alpha, b2_amplitude, beta, kappa_fit,
 *   b_fit, ln_re1, ln_re2, discrepancy_pct, re_eff, lambda_scale,
 *   theta_over_lambda, sse_power_region1, sse_loglaw_region1,
 *   breakpoint_y_plus, gamma_mean, gamma_std, close_enough,
 *   rms_power_region1, rms_loglaw_region1
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "wallscale/analysis.hpp"
#include "wallscale/errors.hpp"

namespace wallscale {

enum class OutputFormat { table_csv, table_json, collapse_csv, profile_svg, collapse_svg };

inline OutputFormat parse_output_format(std::string_view s) {
    if (s == "table_csv") return OutputFormat::table_csv;
    if (s == "table_json") return OutputFormat::table_json;
    if (s == "collapse_csv") return OutputFormat::collapse_csv;
    if (s == "profile_svg") return OutputFormat::profile_svg;
    if (s == "collapse_svg") return OutputFormat::collapse_svg;
    throw ValidationError("unknown output format '" + std::string(s) + "'");
}

inline constexpr std::array<std::string_view, 22> kTableColumns = {
    "label",           "re_theta",          "a_amplitude",        "alpha",
    "b2_amplitude",    "beta",              "kappa_fit",          "b_fit",
    "ln_re1",          "ln_re2",            "discrepancy_pct",    "re_eff",
    "lambda_scale",    "theta_over_lambda", "sse_power_region1",  "sse_loglaw_region1",
    "breakpoint_y_plus", "gamma_mean",      "gamma_std",          "close_enough",
    "rms_power_region1", "rms_loglaw_region1"};

/// Log-law constants quoted in the literature, for comparison with fits.
struct LogLawReference {
    std::string_view source;
    double kappa;
    double b;
};

inline constexpr std::array<LogLawReference, 4> kLogLawReferences = {{
    {"nikuradze", 0.417, 5.84},
    {"monin_yaglom", 0.40, 5.1},
    {"schlichting", 0.40, 5.5},
    {"thesis_2000", 0.38, 4.1},
}};

namespace detail {

inline std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline double round10(double v) { return std::strtod(fmt10(v).c_str(), nullptr); }

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string file_safe(std::string_view s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out.empty() ? "run" : out;
}

}  // namespace detail

inline void write_table_csv(std::span<const RunReport> reports, std::ostream& out) {
    using detail::fmt10;
    for (std::size_t i = 0; i < kTableColumns.size(); ++i)
        out << (i ? "," : "") << kTableColumns[i];
    out << '\n';
    for (const auto& r : reports) {
        out << detail::csv_field(r.label) << ',' << fmt10(r.re_theta) << ','
            << fmt10(r.a_amplitude) << ',' << fmt10(r.alpha) << ',' << fmt10(r.b2_amplitude)
            << ',' << fmt10(r.beta) << ',' << fmt10(r.kappa_fit) << ',' << fmt10(r.b_fit) << ','
            << fmt10(r.ln_re1) << ',' << fmt10(r.ln_re2) << ',' << fmt10(r.discrepancy_pct)
            << ',' << fmt10(r.re_eff) << ',' << fmt10(r.lambda_scale) << ','
            << (r.theta_over_lambda ? fmt10(*r.theta_over_lambda) : "") << ','
            << fmt10(r.sse_power_region1) << ',' << fmt10(r.sse_loglaw_region1) << ','
            << fmt10(r.breakpoint_y_plus) << ',' << fmt10(r.gamma_mean) << ','
            << fmt10(r.gamma_std) << ',' << (r.close_enough ? "true" : "false") << ','
            << fmt10(r.rms_power_region1) << ',' << fmt10(r.rms_loglaw_region1) << '\n';
    }
}

inline nlohmann::ordered_json report_to_json(const RunReport& r) {
    using detail::round10;
    nlohmann::ordered_json j;
    j["label"] = r.label;
    j["re_theta"] = round10(r.re_theta);
    j["a_amplitude"] = round10(r.a_amplitude);
    j["alpha"] = round10(r.alpha);
    j["b2_amplitude"] = round10(r.b2_amplitude);
    j["beta"] = round10(r.beta);
    j["kappa_fit"] = round10(r.kappa_fit);
    j["b_fit"] = round10(r.b_fit);
    j["ln_re1"] = round10(r.ln_re1);
    j["ln_re2"] = round10(r.ln_re2);
    j["discrepancy_pct"] = round10(r.discrepancy_pct);
    j["re_eff"] = round10(r.re_eff);
    j["lambda_scale"] = round10(r.lambda_scale);
    j["theta_over_lambda"] = nullptr;
    if (r.theta_over_lambda) j["theta_over_lambda"] = round10(*r.theta_over_lambda);
    j["sse_power_region1"] = round10(r.sse_power_region1);
    j["sse_loglaw_region1"] = round10(r.sse_loglaw_region1);
    j["breakpoint_y_plus"] = round10(r.breakpoint_y_plus);
    j["gamma_mean"] = round10(r.gamma_mean);
    j["gamma_std"] = round10(r.gamma_std);
    j["close_enough"] = r.close_enough;
    j["rms_power_region1"] = round10(r.rms_power_region1);
    j["rms_loglaw_region1"] = round10(r.rms_loglaw_region1);
    j["warnings"] = r.warnings;
    return j;
}

inline nlohmann::ordered_json summary_to_json(const BatchSummary& s) {
    using detail::round10;
    nlohmann::ordered_json j;
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : s.runs) j["runs"].push_back(report_to_json(r.report));
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : s.failures)
        j["failures"].push_back({{"source", f.source}, {"message", f.message}});

    const auto& c = s.beta_vs_lnre;
    nlohmann::ordered_json corr;
    corr["n_runs"] = c.n_runs;
    corr["status"] = c.sufficient ? "ok" : "insufficient runs";
    if (c.sufficient) {
        corr["slope"] = round10(c.slope);
        corr["intercept"] = round10(c.intercept);
        corr["stderr_slope"] = round10(c.stderr_slope);
        corr["stderr_intercept"] = round10(c.stderr_intercept);
        corr["r_squared"] = round10(c.r_squared);
    }
    j["beta_vs_inverse_ln_re"] = corr;

    auto band = [&](const std::optional<BandCollapse>& b) -> nlohmann::ordered_json {
        if (!b) return nullptr;
        return {{"n_runs", b->n_runs},
                {"n_points", b->deviation.n_points},
                {"mean_offset", round10(b->deviation.mean_offset)},
                {"rms", round10(b->deviation.rms)},
                {"max_abs", round10(b->deviation.max_abs)}};
    };
    j["re_theta_split"] = round10(s.re_theta_split);
    j["collapse_low_re_theta"] = band(s.collapse_low);
    j["collapse_high_re_theta"] = band(s.collapse_high);
    return j;
}

inline void write_table_json(const BatchSummary& s, std::ostream& out) {
    out << summary_to_json(s).dump(2) << '\n';
}

inline void write_collapse_csv(const BatchSummary& s, std::ostream& out) {
    out << "ln_y_plus,psi,run_label\n";
    for (const auto& r : s.runs)
        for (const auto& p : r.collapse)
            out << detail::fmt10(p.ln_y_plus) << ',' << detail::fmt10(p.psi) << ','
                << detail::csv_field(p.run_label) << '\n';
}

/// Model comparison: per-run fit quality of both laws over region I and the
/// fitted log-law constants against the literature values.
inline void write_comparison_csv(std::span<const RunReport> reports, std::ostream& out) {
    using detail::fmt10;
    out << "label,re_theta,sse_power_region1,sse_loglaw_region1,rms_power_region1,"
           "rms_loglaw_region1,preferred,kappa_fit,b_fit";
    for (const auto& ref : kLogLawReferences)
        out << ",dkappa_" << ref.source << ",db_" << ref.source;
    out << '\n';
    for (const auto& r : reports) {
        const char* preferred = r.rms_power_region1 <= r.rms_loglaw_region1 ? "power" : "log";
        out << detail::csv_field(r.label) << ',' << fmt10(r.re_theta) << ','
            << fmt10(r.sse_power_region1) << ',' << fmt10(r.sse_loglaw_region1) << ','
            << fmt10(r.rms_power_region1) << ',' << fmt10(r.rms_loglaw_region1) << ','
            << preferred << ',' << fmt10(r.kappa_fit) << ',' << fmt10(r.b_fit);
        for (const auto& ref : kLogLawReferences)
            out << ',' << fmt10(r.kappa_fit - ref.kappa) << ',' << fmt10(r.b_fit - ref.b);
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// SVG

/// Affine map from a data rectangle onto the plot area of an SVG canvas.
struct PlotFrame {
    double x_lo, x_hi, y_lo, y_hi;
    double width = 640, height = 480, margin = 60;

    double px(double x) const {
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
    }
    double py(double y) const {
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
    }
};

namespace detail {

inline void svg_open(std::ostream& out, const PlotFrame& f, std::string_view title,
                     std::string_view x_label, std::string_view y_label) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
        << f.height << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n"
        << "<rect class=\"frame\" x=\"" << f.margin << "\" y=\"" << f.margin << "\" width=\""
        << f.width - 2 * f.margin << "\" height=\"" << f.height - 2 * f.margin
        << "\" fill=\"none\" stroke=\"black\"/>\n"
        << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 15
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label) << "</text>\n"
        << "<text x=\"15\" y=\"" << f.height / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
        << "transform=\"rotate(-90 15 " << f.height / 2 << ")\">" << xml_escape(y_label)
        << "</text>\n";
    // Tick labels at both ends of each axis.
    out << "<text x=\"" << f.margin << "\" y=\"" << f.height - f.margin + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt10(f.x_lo) << "</text>\n"
        << "<text x=\"" << f.width - f.margin << "\" y=\"" << f.height - f.margin + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt10(f.x_hi) << "</text>\n"
        << "<text x=\"" << f.margin - 4 << "\" y=\"" << f.height - f.margin
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt10(f.y_lo) << "</text>\n"
        << "<text x=\"" << f.margin - 4 << "\" y=\"" << f.margin
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt10(f.y_hi) << "</text>\n";
}

inline void svg_line(std::ostream& out, const PlotFrame& f, std::string_view cls, double x1,
                     double y1, double x2, double y2, std::string_view style) {
    out << "<line class=\"" << cls << "\" x1=\"" << fmt3(f.px(x1)) << "\" y1=\"" << fmt3(f.py(y1))
        << "\" x2=\"" << fmt3(f.px(x2)) << "\" y2=\"" << fmt3(f.py(y2)) << "\" " << style
        << "/>\n";
}

inline void svg_point(std::ostream& out, const PlotFrame& f, double x, double y) {
    out << "<circle class=\"pt\" cx=\"" << fmt3(f.px(x)) << "\" cy=\"" << fmt3(f.py(y))
        << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
}

inline std::pair<double, double> padded(double lo, double hi) {
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
    return {lo - pad, hi + pad};
}

}  // namespace detail

inline constexpr double kReferenceYPlus = 200.0;

/// lg U+ against lg y+ with both fitted segments, the breakpoint, and a
/// reference line at y+ = 200.
inline void write_profile_svg(const RunAnalysis& run, std::ostream& out) {
    const auto pts = run.profile.points();
    double x_lo = std::min(std::log10(pts.front().y_plus), std::log10(kReferenceYPlus));
    double x_hi = std::max(std::log10(pts.back().y_plus), std::log10(kReferenceYPlus));
    double y_lo = std::log10(pts.front().u_plus), y_hi = y_lo;
    for (const auto& p : pts) {
        y_lo = std::min(y_lo, std::log10(p.u_plus));
        y_hi = std::max(y_hi, std::log10(p.u_plus));
    }
    std::tie(x_lo, x_hi) = detail::padded(x_lo, x_hi);
    std::tie(y_lo, y_hi) = detail::padded(y_lo, y_hi);
    const PlotFrame f{x_lo, x_hi, y_lo, y_hi};

    detail::svg_open(out, f, "run " + run.report.label, "lg y+", "lg U+");
    for (const auto& p : pts) detail::svg_point(out, f, std::log10(p.y_plus), std::log10(p.u_plus));

    auto segment = [&](const PowerLawFit& fit, std::string_view cls, std::string_view color) {
        const double a = fit.window.lo, b = fit.window.hi;
        detail::svg_line(out, f, cls, std::log10(a), std::log10(evaluate_power_law(fit, a)),
                         std::log10(b), std::log10(evaluate_power_law(fit, b)),
                         "stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"");
    };
    segment(run.segments.region1, "region1", "firebrick");
    segment(run.segments.region2, "region2", "darkgreen");

    const double bp = std::log10(run.segments.breakpoint_y_plus);
    detail::svg_line(out, f, "breakpoint", bp, y_lo, bp, y_hi,
                     "stroke=\"gray\" stroke-dasharray=\"2,3\"");
    const double ref = std::log10(kReferenceYPlus);
    detail::svg_line(out, f, "yplus200", ref, y_lo, ref, y_hi,
                     "stroke=\"black\" stroke-dasharray=\"6,4\"");
    out << "</svg>\n";
}

/// psi against ln y+ for every run, with the bisectrix psi = ln y+.
inline void write_collapse_svg(const BatchSummary& s, std::ostream& out) {
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& r : s.runs)
        for (const auto& p : r.collapse) {
            const double a = std::min(p.ln_y_plus, p.psi), b = std::max(p.ln_y_plus, p.psi);
            lo = first ? a : std::min(lo, a);
            hi = first ? b : std::max(hi, b);
            first = false;
        }
    std::tie(lo, hi) = detail::padded(lo, hi);
    const PlotFrame f{lo, hi, lo, hi};

    detail::svg_open(out, f, "universal collapse", "ln y+", "psi");
    detail::svg_line(out, f, "bisectrix", lo, lo, hi, hi, "stroke=\"black\"");
    for (const auto& r : s.runs)
        for (const auto& p : r.collapse) detail::svg_point(out, f, p.ln_y_plus, p.psi);
    out << "</svg>\n";
}

/// Writes the requested outputs into out_dir; returns the files written.
inline std::vector<std::filesystem::path> emit_outputs(const BatchSummary& s,
                                                       const std::filesystem::path& out_dir,
                                                       const std::set<OutputFormat>& formats) {
    namespace fs = std::filesystem;
    std::vector<fs::path> written;
    if (formats.empty()) return written;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    auto emit = [&](const fs::path& path, auto&& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        body(out);
        out.flush();
        if (!out) throw Error("write failure on " + path.string());
        written.push_back(path);
    };

    const auto reports = s.reports();
    if (formats.contains(OutputFormat::table_csv))
        emit(out_dir / "table.csv", [&](std::ostream& o) { write_table_csv(reports, o); });
    if (formats.contains(OutputFormat::table_json))
        emit(out_dir / "table.json", [&](std::ostream& o) { write_table_json(s, o); });
    if (formats.contains(OutputFormat::collapse_csv))
        emit(out_dir / "collapse.csv", [&](std::ostream& o) { write_collapse_csv(s, o); });
    if (formats.contains(OutputFormat::collapse_svg))
        emit(out_dir / "collapse.svg", [&](std::ostream& o) { write_collapse_svg(s, o); });
    if (formats.contains(OutputFormat::profile_svg)) {
        for (std::size_t i = 0; i < s.runs.size(); ++i) {
            char prefix[16];
            std::snprintf(prefix, sizeof prefix, "%03zu_", i);
            const auto name = "profile_" + std::string(prefix) +
                              detail::file_safe(s.runs[i].report.label) + ".svg";
            emit(out_dir / name, [&](std::ostream& o) { write_profile_svg(s.runs[i], o); });
        }
    }
    return written;
}

}  // namespace wallscale
