#pragma once

// Diagnostic function Gamma and the universal-collapse coordinate psi.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wallscale/errors.hpp"
#include "wallscale/profile.hpp"
#include "wallscale/scaling.hpp"

namespace wallscale {

struct GammaPoint {
    double y_plus = 0.0;
    double gamma = 0.0;
    bool one_sided = false;  // endpoint: two-point slope
};

struct GammaSeries {
    std::vector<GammaPoint> points;
    Window window;
    std::size_t window_count = 0;
    double window_mean = 0.0;
    double window_std = 0.0;  // population standard deviation
};

/*
 * Gamma = (y+/U+) dU+/dy+ = d ln U+ / d ln y+, taken as the local slope in
 * log-log coordinates: the three-point derivative on a nonuniform grid at
 * interior points and a two-point slope at both ends. Statistics cover the
 * points with y+ in `window` (the whole profile when omitted).
 */
inline GammaSeries gamma_series(const VelocityProfile& profile,
                                std::optional<Window> window = std::nullopt) {
    const auto pts = profile.points();
    const std::size_t n = pts.size();
    std::vector<double> x(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(pts[i].y_plus);
        f[i] = std::log(pts[i].u_plus);
    }

    GammaSeries g;
    g.window = window.value_or(Window{profile.y_plus_min(), profile.y_plus_max()});
    g.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        GammaPoint gp{pts[i].y_plus, 0.0, false};
        if (i == 0) {
            gp.gamma = (f[1] - f[0]) / (x[1] - x[0]);
            gp.one_sided = true;
        } else if (i + 1 == n) {
            gp.gamma = (f[i] - f[i - 1]) / (x[i] - x[i - 1]);
            gp.one_sided = true;
        } else {
            const double h1 = x[i] - x[i - 1];
            const double h2 = x[i + 1] - x[i];
            gp.gamma = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
                       h1 / (h2 * (h1 + h2)) * f[i + 1];
        }
        g.points.push_back(gp);
    }

    double sum = 0.0;
    for (const auto& p : g.points)
        if (g.window.contains(p.y_plus)) {
            sum += p.gamma;
            ++g.window_count;
        }
    if (g.window_count > 0) {
        g.window_mean = sum / static_cast<double>(g.window_count);
        double ss = 0.0;
        for (const auto& p : g.points)
            if (g.window.contains(p.y_plus)) ss += (p.gamma - g.window_mean) * (p.gamma - g.window_mean);
        g.window_std = std::sqrt(ss / static_cast<double>(g.window_count));
    }
    return g;
}

struct CollapsePoint {
    double ln_y_plus = 0.0;
    double psi = 0.0;
    std::string run_label;
};

/*
 * psi = (1/alpha) ln(U+ / (c1 ln Re + c2)) with alpha = c / ln Re. With the
 * default constants this equals (1/alpha) ln(2 alpha U+ / (sqrt(3) + 5 alpha)),
 * and a profile that follows the scaling law maps onto psi = ln y+.
 */
inline std::vector<CollapsePoint> psi_transform(const VelocityProfile& profile, double ln_re,
                                                const ScalingLawConstants& k,
                                                const Window& window) {
    if (!(ln_re > 0.0)) throw DomainError("psi_transform: ln_re must be positive");
    const double alpha = k.c / ln_re;
    const double amplitude = scaling_amplitude(ln_re, k);
    std::vector<CollapsePoint> out;
    for (const auto& p : profile.points()) {
        if (!window.contains(p.y_plus)) continue;
        const double arg = p.u_plus / amplitude;
        if (!(arg > 0.0) || !std::isfinite(arg))
            throw DomainError("psi_transform: non-positive log argument at y+ = " +
                              std::to_string(p.y_plus));
        out.push_back({std::log(p.y_plus), std::log(arg) / alpha, profile.meta().label});
    }
    return out;
}

struct CollapseDeviation {
    double mean_offset = 0.0;
    double rms = 0.0;  // root mean square of psi - ln y+
    double max_abs = 0.0;
    std::size_t n_points = 0;
};

inline CollapseDeviation collapse_deviation(std::span<const CollapsePoint> points) {
    if (points.empty()) throw DomainError("collapse_deviation: no points");
    CollapseDeviation d;
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : points) {
        const double r = p.psi - p.ln_y_plus;
        sum += r;
        sum_sq += r * r;
        d.max_abs = std::max(d.max_abs, std::abs(r));
    }
    d.n_points = points.size();
    d.mean_offset = sum / static_cast<double>(points.size());
    d.rms = std::sqrt(sum_sq / static_cast<double>(points.size()));
    return d;
}

}  // namespace wallscale
