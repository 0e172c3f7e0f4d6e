// wallscale command-line front end: analyze, generate, collapse, compare.
//
// Exit codes: 0 every run succeeded, 2 some runs failed, 1 all runs failed
// or the invocation was invalid.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wallscale/analysis.hpp"
#include "wallscale/ingest.hpp"
#include "wallscale/output.hpp"
#include "wallscale/synthetic.hpp"

namespace fs = std::filesystem;
using namespace wallscale;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitPartial = 2;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    if (!detail::parse_double(s, v)) throw ValidationError(what + ": not a number '" + s + "'");
    return v;
}

MetadataMap parse_metadata(const std::vector<std::string>& items) {
    MetadataMap m;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError("--metadata expects key=value, got '" + item + "'");
        m[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return m;
}

// Options shared by analyze, collapse and compare.
struct AnalysisOptions {
    std::vector<std::string> files;
    std::string input_format = "canonical";
    std::vector<std::string> metadata;
    double sublayer_cutoff = 100.0;
    std::string breakpoint_range;
    double closeness_pct = kDefaultClosenessPct;
    double re_theta_split = 15000.0;
    std::string out_dir = ".";
    bool serial = false;

    void attach(CLI::App* app) {
        app->add_option("files", files, "Profile files")->required()->check(CLI::ExistingFile);
        app->add_option("--input-format", input_format, "canonical | table")
            ->check(CLI::IsMember({"canonical", "table"}));
        app->add_option("--metadata", metadata, "key=value run metadata (repeatable)");
        app->add_option("--sublayer-cutoff", sublayer_cutoff, "Lower edge of region I in y+");
        app->add_option("--breakpoint-range", breakpoint_range,
                        "Breakpoint search range LO:HI in y+ (default 150:y+max/2)");
        app->add_option("--closeness-threshold-pct", closeness_pct,
                        "Largest ln Re1 / ln Re2 discrepancy accepted, percent");
        app->add_option("--re-theta-split", re_theta_split,
                        "Re_theta separating the low and high collapse bands");
        app->add_option("--out-dir", out_dir, "Output directory");
        app->add_flag("--serial", serial, "Analyze runs one at a time");
    }

    AnalysisConfig config() const {
        AnalysisConfig c;
        c.sublayer_cutoff = sublayer_cutoff;
        c.closeness_threshold_pct = closeness_pct;
        c.re_theta_split = re_theta_split;
        c.input_format =
            input_format == "table" ? ProfileFormat::whitespace_table : ProfileFormat::canonical;
        c.metadata = parse_metadata(metadata);
        c.parallel = !serial;
        if (!breakpoint_range.empty()) {
            const auto parts = split(breakpoint_range, ':');
            if (parts.size() != 2) throw ValidationError("--breakpoint-range expects LO:HI");
            c.breakpoint_range = Window{to_double(parts[0], "--breakpoint-range"),
                                        to_double(parts[1], "--breakpoint-range")};
        }
        return c;
    }

    std::vector<fs::path> paths() const { return {files.begin(), files.end()}; }
};

std::set<OutputFormat> parse_formats(const std::string& list) {
    std::set<OutputFormat> out;
    for (const auto& f : split(list, ',')) out.insert(parse_output_format(f));
    return out;
}

int exit_code(const BatchSummary& s) {
    for (const auto& f : s.failures) std::cerr << "error: " << f.source << ": " << f.message << '\n';
    if (s.runs.empty()) return kExitFailure;
    return s.failures.empty() ? kExitOk : kExitPartial;
}

void print_summary(const BatchSummary& s) {
    std::printf("%-20s %10s %9s %9s %8s %s\n", "label", "re_theta", "ln_re1", "ln_re2", "disc%",
                "close");
    for (const auto& r : s.reports()) {
        std::printf("%-20s %10.0f %9.4f %9.4f %8.3f %s\n", r.label.c_str(), r.re_theta, r.ln_re1,
                    r.ln_re2, r.discrepancy_pct, r.close_enough ? "yes" : "no");
        for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s: %s\n", r.label.c_str(), w.c_str());
    }
    const auto& c = s.beta_vs_lnre;
    if (c.sufficient)
        std::printf("beta vs 1/ln Re: slope %.4f +- %.4f, intercept %.5f +- %.5f (%zu runs)\n",
                    c.slope, c.stderr_slope, c.intercept, c.stderr_intercept, c.n_runs);
    else
        std::printf("beta vs 1/ln Re: insufficient runs (%zu)\n", c.n_runs);
}

void print_band(const char* name, const std::optional<BandCollapse>& b) {
    if (!b) {
        std::printf("%s: no runs\n", name);
        return;
    }
    std::printf("%s: %zu runs, %zu points, mean offset %.5f, rms %.5f, max %.5f\n", name, b->n_runs,
                b->deviation.n_points, b->deviation.mean_offset, b->deviation.rms,
                b->deviation.max_abs);
}

int run_analyze(const AnalysisOptions& opt, const std::string& formats) {
    const auto paths = opt.paths();
    const auto summary = analyze_batch(paths, opt.config());
    print_summary(summary);
    for (const auto& p : emit_outputs(summary, opt.out_dir, parse_formats(formats)))
        std::cerr << "wrote " << p.string() << '\n';
    return exit_code(summary);
}

int run_collapse(const AnalysisOptions& opt, const std::string& formats,
                 std::optional<double> min_re_theta) {
    const auto config = opt.config();
    auto summary = analyze_batch(opt.paths(), config);
    if (min_re_theta) {
        std::erase_if(summary.runs, [&](const RunAnalysis& r) {
            return !(r.profile.meta().re_theta > *min_re_theta);
        });
        summarize(summary, config.re_theta_split);
    }
    print_band("re_theta <= split", summary.collapse_low);
    print_band("re_theta >  split", summary.collapse_high);
    for (const auto& p : emit_outputs(summary, opt.out_dir, parse_formats(formats)))
        std::cerr << "wrote " << p.string() << '\n';
    return exit_code(summary);
}

int run_compare(const AnalysisOptions& opt, const std::string& output) {
    const auto summary = analyze_batch(opt.paths(), opt.config());
    const auto reports = summary.reports();
    if (output.empty() || output == "-") {
        write_comparison_csv(reports, std::cout);
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw Error("cannot write " + output);
        write_comparison_csv(reports, out);
    }
    return exit_code(summary);
}

struct GenerateOptions {
    std::string model = "scaling_law";
    std::optional<double> ln_re, kappa, b, a, alpha, breakpoint, beta;
    std::string grid = "100:5000:40";
    double noise_pct = 0.0;
    std::uint64_t seed = 0;
    double jitter = 0.0;
    std::vector<std::string> metadata;
    std::string output = "-";

    GeneratorSpec spec() const {
        auto need = [](const std::optional<double>& v, const char* flag) {
            if (!v) throw ValidationError(std::string("generate: ") + flag + " is required");
            return *v;
        };
        GeneratorSpec s;
        if (model == "scaling_law") {
            s.model = ScalingLawModel{need(ln_re, "--ln-re")};
        } else if (model == "log_law") {
            s.model = LogLawModel{need(kappa, "--kappa"), need(b, "--b")};
        } else {
            const double bp = need(breakpoint, "--breakpoint");
            if (ln_re) {
                auto m = scaling_two_segment(*ln_re, bp);
                if (a) m.a = *a;
                if (alpha) m.alpha = *alpha;
                if (beta) m.beta = *beta;
                s.model = m;
            } else {
                s.model = TwoSegmentModel{need(a, "--a"), need(alpha, "--alpha"), bp,
                                          need(beta, "--beta")};
            }
        }

        const auto parts = split(grid, ':');
        if (parts.size() != 3) throw ValidationError("--grid expects LO:HI:N");
        s.grid.lo = to_double(parts[0], "--grid");
        s.grid.hi = to_double(parts[1], "--grid");
        const double count = to_double(parts[2], "--grid");
        if (!(count >= 0.0) || count != std::floor(count))
            throw ValidationError("--grid count must be a non-negative integer");
        s.grid.count = static_cast<std::size_t>(count);
        s.noise_pct = noise_pct;
        s.seed = seed;
        s.grid_jitter = jitter;

        MetadataMap m{{"label", "synthetic"}, {"re_theta", "10000"}, {"u_free", "15"},
                      {"u_tau", "0.5"},       {"nu", "1.5e-05"}};
        for (const auto& [k, v] : parse_metadata(metadata)) m[k] = v;
        s.meta = metadata_from_map(m);
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scaling-law and log-law analysis of turbulent boundary-layer velocity profiles"};
    app.require_subcommand(1);

    AnalysisOptions analyze_opt;
    std::string analyze_formats = "table_csv,table_json";
    auto* analyze = app.add_subcommand("analyze", "Fit profiles and write the per-run table");
    analyze_opt.attach(analyze);
    analyze->add_option("--format", analyze_formats,
                        "Comma list: table_csv,table_json,collapse_csv,profile_svg,collapse_svg");

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic profile in canonical format");
    generate->add_option("--model", gen.model, "scaling_law | log_law | two_segment")
        ->check(CLI::IsMember({"scaling_law", "log_law", "two_segment"}));
    generate->add_option("--ln-re", gen.ln_re, "ln Re (scaling_law; two_segment defaults)");
    generate->add_option("--kappa", gen.kappa, "log_law kappa");
    generate->add_option("--b", gen.b, "log_law additive constant");
    generate->add_option("--a", gen.a, "two_segment region I amplitude");
    generate->add_option("--alpha", gen.alpha, "two_segment region I exponent");
    generate->add_option("--breakpoint", gen.breakpoint, "two_segment breakpoint y+");
    generate->add_option("--beta", gen.beta, "two_segment region II exponent");
    generate->add_option("--grid", gen.grid, "LO:HI:N log-spaced y+ grid");
    generate->add_option("--noise-pct", gen.noise_pct, "Multiplicative lognormal noise, percent");
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--grid-jitter", gen.jitter, "Grid jitter as a fraction of log spacing");
    generate->add_option("--metadata", gen.metadata, "key=value run metadata (repeatable)");
    generate->add_option("-o,--output", gen.output, "Output file ('-' for stdout)");

    AnalysisOptions collapse_opt;
    std::string collapse_formats = "collapse_csv,collapse_svg";
    std::optional<double> min_re_theta;
    auto* collapse = app.add_subcommand("collapse", "Universal-collapse dataset and plot");
    collapse_opt.attach(collapse);
    collapse->add_option("--format", collapse_formats, "Comma list of output formats");
    collapse->add_option("--min-re-theta", min_re_theta, "Keep runs with Re_theta above this");

    AnalysisOptions compare_opt;
    std::string compare_output = "-";
    auto* compare = app.add_subcommand("compare", "Power law vs log law over region I");
    compare_opt.attach(compare);
    compare->add_option("-o,--output", compare_output, "Output CSV ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitFailure;
    }

    try {
        if (*analyze) return run_analyze(analyze_opt, analyze_formats);
        if (*collapse) return run_collapse(collapse_opt, collapse_formats, min_re_theta);
        if (*compare) return run_compare(compare_opt, compare_output);
        if (*generate) {
            const auto profile = wallscale::generate(gen.spec());
            if (gen.output == "-") {
                write_profile(profile, std::cout);
            } else {
                const std::filesystem::path dest(gen.output);
                if (dest.has_parent_path()) std::filesystem::create_directories(dest.parent_path());
                std::ofstream out(dest, std::ios::binary);
                if (!out) throw Error("cannot write " + gen.output);
                write_profile(profile, out);
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
