#pragma once

// Least-squares fits: straight lines, power laws in log-log coordinates,
// log laws in semi-log coordinates, and the two-segment broken line.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wallscale/errors.hpp"
#include "wallscale/profile.hpp"

namespace wallscale {

struct LinearFitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double stderr_intercept = 0.0;
    double r_squared = 0.0;
    double sse = 0.0;
    std::size_t n_points = 0;
};

/// Ordinary least squares y = intercept + slope*x. Standard errors use the
/// residual variance with n-2 degrees of freedom. Constant ys give r^2 = 1.
inline LinearFitResult fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw DegenerateInputError("fit_line: xs and ys differ in length");
    const std::size_t n = xs.size();
    if (n < 3)
        throw DegenerateInputError("fit_line: at least 3 points required, got " +
                                   std::to_string(n));

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - x_mean;
        const double dy = ys[i] - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DegenerateInputError("fit_line: xs are all equal");

    LinearFitResult r;
    r.n_points = n;
    r.slope = sxy / sxx;
    r.intercept = y_mean - r.slope * x_mean;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (r.intercept + r.slope * xs[i]);
        sse += e * e;
    }
    r.sse = sse;
    r.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;

    const double s2 = sse / static_cast<double>(n - 2);
    r.stderr_slope = std::sqrt(s2 / sxx);
    r.stderr_intercept = std::sqrt(s2 * (1.0 / static_cast<double>(n) + x_mean * x_mean / sxx));
    return r;
}

namespace detail {

inline std::string describe(const Window& w) {
    return "[" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]";
}

// Transformed coordinates of the points inside a window.
struct WindowSample {
    std::vector<double> ln_y;
    std::vector<double> u;  // ln U+ or U+, depending on the caller
};

inline WindowSample sample_window(const VelocityProfile& profile, const Window& window,
                                  bool log_u) {
    WindowSample s;
    for (const auto& p : profile.points()) {
        if (!window.contains(p.y_plus)) continue;
        s.ln_y.push_back(std::log(p.y_plus));
        s.u.push_back(log_u ? std::log(p.u_plus) : p.u_plus);
    }
    if (s.ln_y.size() < 3)
        throw InsufficientPointsError("window " + describe(window) + " holds " +
                                      std::to_string(s.ln_y.size()) +
                                      " points; at least 3 required");
    return s;
}

inline PowerLawFit power_law_from_line(const LinearFitResult& line, const Window& window) {
    PowerLawFit f;
    f.amplitude = std::exp(line.intercept);
    f.exponent = line.slope;
    f.stderr_amplitude = f.amplitude * line.stderr_intercept;
    f.stderr_exponent = line.stderr_slope;
    f.r_squared = line.r_squared;
    f.sse = line.sse;
    f.n_points = line.n_points;
    f.window = window;
    return f;
}

}  // namespace detail

/// Fits U+ = A (y+)^alpha to the points with y+ in `window` (inclusive).
inline PowerLawFit fit_power_law(const VelocityProfile& profile, const Window& window) {
    const auto s = detail::sample_window(profile, window, true);
    return detail::power_law_from_line(fit_line(s.ln_y, s.u), window);
}

/// Fits U+ = (1/kappa) ln y+ + B to the points with y+ in `window`.
inline LogLawFit fit_log_law(const VelocityProfile& profile, const Window& window) {
    const auto s = detail::sample_window(profile, window, false);
    const auto line = fit_line(s.ln_y, s.u);
    if (!(line.slope > 0.0))
        throw NonPhysicalFitError("log-law slope " + std::to_string(line.slope) +
                                  " is not positive; kappa undefined");
    LogLawFit f;
    f.kappa = 1.0 / line.slope;
    f.intercept_b = line.intercept;
    f.stderr_kappa = line.stderr_slope / (line.slope * line.slope);
    f.stderr_b = line.stderr_intercept;
    f.r_squared = line.r_squared;
    f.sse = line.sse;
    f.n_points = line.n_points;
    f.window = window;
    return f;
}

/// Default breakpoint search range [150, y+_max / 2].
inline Window default_breakpoint_range(const VelocityProfile& profile) {
    return {150.0, 0.5 * profile.y_plus_max()};
}

/*
 * Exhaustive breakpoint search. Every data point with y+ in the search
 * range is a candidate; region I is fitted on [sublayer_cutoff, candidate]
 * and region II on [candidate, y+_max], both in log-log coordinates, with
 * the candidate shared by both. The candidate with the least total SSE
 * wins. SSE values within 1e-12 of the spread of ln U+ over the fitted
 * span count as equal, and ties go to the smallest candidate.
 */
inline SegmentedFit fit_broken_line(const VelocityProfile& profile, double search_lo,
                                    double search_hi, double sublayer_cutoff) {
    const auto pts = profile.points();
    std::vector<double> ln_y, ln_u;
    for (const auto& p : pts) {
        if (p.y_plus < sublayer_cutoff) continue;
        ln_y.push_back(std::log(p.y_plus));
        ln_u.push_back(std::log(p.u_plus));
    }
    const std::size_t n = ln_y.size();

    double mean = 0.0, spread = 0.0;
    for (double v : ln_u) mean += v;
    if (n > 0) mean /= static_cast<double>(n);
    for (double v : ln_u) spread += (v - mean) * (v - mean);
    const double tie_tol = 1e-12 * spread;

    std::optional<std::size_t> best;
    double best_sse = 0.0;
    // Index k is the breakpoint; region I = [0, k], region II = [k, n-1].
    for (std::size_t k = 2; k + 2 < n; ++k) {
        const double y = pts[pts.size() - n + k].y_plus;
        if (y < search_lo || y > search_hi) continue;
        const std::span<const double> xs(ln_y), us(ln_u);
        const auto left = fit_line(xs.subspan(0, k + 1), us.subspan(0, k + 1));
        const auto right = fit_line(xs.subspan(k), us.subspan(k));
        const double sse = left.sse + right.sse;
        if (!best || sse < best_sse - tie_tol) {
            best = k;
            best_sse = sse;
        }
    }
    if (!best)
        throw NoValidBreakpointError(
            "no valid breakpoint: no candidate in [" + std::to_string(search_lo) + ", " +
            std::to_string(search_hi) + "] leaves 3 points on each side above y+ = " +
            std::to_string(sublayer_cutoff));

    SegmentedFit seg;
    seg.breakpoint_y_plus = pts[pts.size() - n + *best].y_plus;
    seg.region1 = fit_power_law(profile, {sublayer_cutoff, seg.breakpoint_y_plus});
    seg.region2 = fit_power_law(profile, {seg.breakpoint_y_plus, profile.y_plus_max()});
    seg.total_sse = seg.region1.sse + seg.region2.sse;
    return seg;
}

}  // namespace wallscale
