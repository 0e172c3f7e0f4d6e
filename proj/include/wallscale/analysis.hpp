#pragma once

/*
 * Per-run pipeline and batch summary.
 *
 * analyze_run: broken-line segmentation -> power laws for both regions ->
 * log-law fit over region I for comparison -> ln Re1 / ln Re2 ->
 * effective Reynolds number -> Gamma over region I -> psi collapse over
 * region I at the effective ln Re.
 */

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wallscale/diagnostics.hpp"
#include "wallscale/errors.hpp"
#include "wallscale/ingest.hpp"
#include "wallscale/profile.hpp"
#include "wallscale/regression.hpp"
#include "wallscale/scaling.hpp"

namespace wallscale {

struct AnalysisConfig {
    double sublayer_cutoff = 100.0;
    std::optional<Window> breakpoint_range;  // default: [150, y+_max / 2]
    double closeness_threshold_pct = kDefaultClosenessPct;
    double re_theta_split = 15000.0;
    ScalingLawConstants constants{};
    ProfileFormat input_format = ProfileFormat::canonical;
    MetadataMap metadata;  // overrides applied to every parsed file
    bool parallel = true;
};

struct RunReport {
    std::string label;
    double re_theta = 0.0;
    double a_amplitude = 0.0;
    double alpha = 0.0;
    double b2_amplitude = 0.0;
    double beta = 0.0;
    double kappa_fit = 0.0;
    double b_fit = 0.0;
    double ln_re1 = 0.0;
    double ln_re2 = 0.0;
    double discrepancy_pct = 0.0;
    double re_eff = 0.0;
    double lambda_scale = 0.0;
    std::optional<double> theta_over_lambda;
    double sse_power_region1 = 0.0;
    double sse_loglaw_region1 = 0.0;
    double breakpoint_y_plus = 0.0;
    double gamma_mean = 0.0;
    double gamma_std = 0.0;
    // Beyond the core table: verdict and linear-coordinate RMS errors.
    bool close_enough = false;
    double rms_power_region1 = 0.0;
    double rms_loglaw_region1 = 0.0;
    std::vector<std::string> warnings;
};

/// Everything computed for one run; RunReport is the tabulated view.
struct RunAnalysis {
    VelocityProfile profile;
    SegmentedFit segments;
    LogLawFit loglaw;
    ScalingSolution scaling;
    GammaSeries gamma;
    std::vector<CollapsePoint> collapse;
    RunReport report;
};

namespace detail {

template <class F>
auto stage(const std::string& label, const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(label, name, e.what());
    }
}

// RMS of U+ prediction error in linear coordinates over a window.
template <class Model>
double rms_linear(const VelocityProfile& profile, const Window& w, Model&& model) {
    double ss = 0.0;
    std::size_t n = 0;
    for (const auto& p : profile.points()) {
        if (!w.contains(p.y_plus)) continue;
        const double e = p.u_plus - model(p.y_plus);
        ss += e * e;
        ++n;
    }
    return n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
}

}  // namespace detail

inline RunAnalysis analyze_run_detailed(const VelocityProfile& profile,
                                        const AnalysisConfig& config = {}) {
    const std::string& label = profile.meta().label;
    const Window range = config.breakpoint_range.value_or(default_breakpoint_range(profile));

    const SegmentedFit seg = detail::stage(label, "segmentation", [&] {
        return fit_broken_line(profile, range.lo, range.hi, config.sublayer_cutoff);
    });
    const Window region1 = seg.region1.window;
    const LogLawFit loglaw =
        detail::stage(label, "log-law fit", [&] { return fit_log_law(profile, region1); });

    const ScalingSolution sol = detail::stage(label, "scaling solve", [&] {
        const double ln1 = solve_ln_re1(seg.region1.amplitude, config.constants);
        const double ln2 = solve_ln_re2(seg.region1.exponent, config.constants);
        return effective_reynolds(ln1, ln2, profile.meta(), config.closeness_threshold_pct);
    });

    GammaSeries gamma =
        detail::stage(label, "diagnostics", [&] { return gamma_series(profile, region1); });
    std::vector<CollapsePoint> collapse = detail::stage(label, "collapse", [&] {
        return psi_transform(profile, sol.ln_re_eff, config.constants, region1);
    });

    RunReport r;
    r.label = label;
    r.re_theta = profile.meta().re_theta;
    r.a_amplitude = seg.region1.amplitude;
    r.alpha = seg.region1.exponent;
    r.b2_amplitude = seg.region2.amplitude;
    r.beta = seg.region2.exponent;
    r.kappa_fit = loglaw.kappa;
    r.b_fit = loglaw.intercept_b;
    r.ln_re1 = sol.ln_re1;
    r.ln_re2 = sol.ln_re2;
    r.discrepancy_pct = sol.discrepancy_pct;
    r.re_eff = sol.re_eff;
    r.lambda_scale = sol.lambda_scale;
    r.theta_over_lambda = sol.theta_over_lambda;
    r.sse_power_region1 = seg.region1.sse;
    r.sse_loglaw_region1 = loglaw.sse;
    r.breakpoint_y_plus = seg.breakpoint_y_plus;
    r.gamma_mean = gamma.window_mean;
    r.gamma_std = gamma.window_std;
    r.close_enough = sol.close_enough;
    r.rms_power_region1 = detail::rms_linear(
        profile, region1, [&](double y) { return evaluate_power_law(seg.region1, y); });
    r.rms_loglaw_region1 = detail::rms_linear(
        profile, region1, [&](double y) { return evaluate_log_law(loglaw, y); });
    if (!seg.exponent_decreases())
        r.warnings.push_back("region II exponent is not below region I exponent");
    if (!sol.close_enough)
        r.warnings.push_back("ln Re1 and ln Re2 differ by more than the closeness threshold");

    return RunAnalysis{profile, seg, loglaw, sol, std::move(gamma), std::move(collapse),
                       std::move(r)};
}

inline RunReport analyze_run(const VelocityProfile& profile, const AnalysisConfig& config = {}) {
    return analyze_run_detailed(profile, config).report;
}

struct RunFailure {
    std::string source;  // file path or run label
    std::string message;
};

/// OLS of beta against 1/ln Re_eff across runs.
struct BetaCorrelationFit {
    bool sufficient = false;  // false when fewer than 3 runs
    std::size_t n_runs = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double stderr_intercept = 0.0;
    double r_squared = 0.0;
};

struct BandCollapse {
    std::size_t n_runs = 0;
    CollapseDeviation deviation;
};

struct BatchSummary {
    std::vector<RunAnalysis> runs;  // input order
    std::vector<RunFailure> failures;
    BetaCorrelationFit beta_vs_lnre;
    std::optional<BandCollapse> collapse_low;   // re_theta <= split
    std::optional<BandCollapse> collapse_high;  // re_theta > split
    double re_theta_split = 15000.0;

    std::vector<RunReport> reports() const {
        std::vector<RunReport> out;
        out.reserve(runs.size());
        for (const auto& r : runs) out.push_back(r.report);
        return out;
    }
};

inline BetaCorrelationFit fit_beta_correlation(std::span<const RunAnalysis> runs) {
    BetaCorrelationFit c;
    c.n_runs = runs.size();
    if (runs.size() < 3) return c;
    std::vector<double> xs, ys;
    for (const auto& r : runs) {
        xs.push_back(1.0 / r.scaling.ln_re_eff);
        ys.push_back(r.segments.region2.exponent);
    }
    try {
        const auto line = fit_line(xs, ys);
        c.sufficient = true;
        c.slope = line.slope;
        c.intercept = line.intercept;
        c.stderr_slope = line.stderr_slope;
        c.stderr_intercept = line.stderr_intercept;
        c.r_squared = line.r_squared;
    } catch (const DegenerateInputError&) {
        c.sufficient = false;
    }
    return c;
}

/// Recomputes the cross-run aggregates (beta correlation, collapse bands)
/// from summary.runs.
inline void summarize(BatchSummary& s, double re_theta_split) {
    s.re_theta_split = re_theta_split;
    s.beta_vs_lnre = fit_beta_correlation(s.runs);

    std::vector<CollapsePoint> low, high;
    std::size_t n_low = 0, n_high = 0;
    for (const auto& r : s.runs) {
        const bool is_high = r.profile.meta().re_theta > re_theta_split;
        auto& dst = is_high ? high : low;
        dst.insert(dst.end(), r.collapse.begin(), r.collapse.end());
        ++(is_high ? n_high : n_low);
    }
    s.collapse_low.reset();
    s.collapse_high.reset();
    if (!low.empty()) s.collapse_low = BandCollapse{n_low, collapse_deviation(low)};
    if (!high.empty()) s.collapse_high = BandCollapse{n_high, collapse_deviation(high)};
}

namespace detail {

using RunTask = std::function<RunAnalysis()>;

inline BatchSummary run_tasks(std::vector<std::pair<std::string, RunTask>> tasks,
                              const AnalysisConfig& config) {
    BatchSummary s;

    std::vector<std::future<RunAnalysis>> futures;
    futures.reserve(tasks.size());
    const auto policy = config.parallel ? std::launch::async : std::launch::deferred;
    for (auto& t : tasks) futures.push_back(std::async(policy, t.second));

    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            s.runs.push_back(futures[i].get());
        } catch (const std::exception& e) {
            s.failures.push_back({tasks[i].first, e.what()});
        }
    }

    summarize(s, config.re_theta_split);
    return s;
}

}  // namespace detail

/// Analyzes in-memory profiles; results keep input order.
inline BatchSummary analyze_profiles(std::span<const VelocityProfile> profiles,
                                     const AnalysisConfig& config = {}) {
    std::vector<std::pair<std::string, detail::RunTask>> tasks;
    for (const auto& p : profiles)
        tasks.emplace_back(p.meta().label, [&p, &config] { return analyze_run_detailed(p, config); });
    return detail::run_tasks(std::move(tasks), config);
}

/// Reads one profile file. Runs without a label take the file stem.
inline VelocityProfile load_profile(const std::filesystem::path& path,
                                    const AnalysisConfig& config = {}) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    VelocityProfile p = parse_profile(in, config.input_format, config.metadata);
    if (!p.meta().label.empty()) return p;
    RunMetadata meta = p.meta();
    meta.label = path.stem().string();
    return VelocityProfile::from_wall_units(std::move(meta), {p.points().begin(), p.points().end()});
}

/// Parses and analyzes each file; per-file failures are collected and the
/// batch continues.
inline BatchSummary analyze_batch(std::span<const std::filesystem::path> paths,
                                  const AnalysisConfig& config = {}) {
    std::vector<std::pair<std::string, detail::RunTask>> tasks;
    for (const auto& path : paths)
        tasks.emplace_back(path.string(), [path, &config] {
            return analyze_run_detailed(load_profile(path, config), config);
        });
    return detail::run_tasks(std::move(tasks), config);
}

}  // namespace wallscale
