#pragma once

/*
 * Deterministic synthetic profiles.
 *
 * Random stream: std::mt19937_64 seeded with `seed` (the engine's output
 * sequence is fixed by the C++ standard). Each 64-bit draw x becomes a
 * uniform deviate u = ((x >> 11) + 0.5) * 2^-53 in the open interval (0, 1),
 * and a standard-normal deviate is g = -sqrt(2) * erfc_inv(2u) (inverse CDF).
 *
 * Grid: `count` points log-spaced over [lo, hi]. With grid_jitter = j > 0,
 * each interior point is moved by (u - 0.5) * j times the log spacing, one
 * draw per interior point in order. For the two-segment model the grid
 * point nearest the breakpoint is then replaced by the breakpoint itself.
 *
 * Noise: U+ is multiplied by exp((noise_pct / 100) * g), one draw per point
 * in order of increasing y+, after all jitter draws. With noise_pct = 0 no
 * noise draws are made.
 */

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "wallscale/errors.hpp"
#include "wallscale/profile.hpp"
#include "wallscale/scaling.hpp"

namespace wallscale {

struct ScalingLawModel {
    double ln_re = 0.0;
    ScalingLawConstants constants{};
};

struct LogLawModel {
    double kappa = 0.0;
    double b = 0.0;
};

/// A (y+)^alpha below the breakpoint, continued above it by
/// A breakpoint^(alpha - beta) (y+)^beta.
struct TwoSegmentModel {
    double a = 0.0;
    double alpha = 0.0;
    double breakpoint = 0.0;
    double beta = 0.0;

    double region2_amplitude() const { return a * std::pow(breakpoint, alpha - beta); }
};

using GeneratorModel = std::variant<ScalingLawModel, LogLawModel, TwoSegmentModel>;

struct LogGrid {
    double lo = 100.0;
    double hi = 5000.0;
    std::size_t count = 40;
};

struct GeneratorSpec {
    GeneratorModel model;
    LogGrid grid{};
    double noise_pct = 0.0;  // percent, e.g. 1.0 for 1 %
    std::uint64_t seed = 0;
    double grid_jitter = 0.0;  // fraction of log spacing, in [0, 1)
    RunMetadata meta{};
};

/// Region I from the scaling law at ln Re, region II with the beta
/// correlation; the usual shape of a synthetic boundary-layer run.
inline TwoSegmentModel scaling_two_segment(double ln_re, double breakpoint,
                                           const ScalingLawConstants& k = {}) {
    return {scaling_amplitude(ln_re, k), scaling_exponent(ln_re, k), breakpoint,
            beta_correlation(ln_re)};
}

/// Metadata for a synthetic run: water-tunnel-like U, u_tau and nu, with
/// Re_theta supplied by the caller.
inline RunMetadata synthetic_metadata(std::string label, double re_theta) {
    RunMetadata m;
    m.label = std::move(label);
    m.re_theta = re_theta;
    m.u_free = 15.0;
    m.u_tau = 0.5;
    m.nu = 1.5e-5;
    return m;
}

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        const std::uint64_t x = engine_();
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform()); }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline void validate_spec(const GeneratorSpec& spec) {
    if (spec.grid.count < VelocityProfile::kMinPoints)
        throw ValidationError("generator grid needs at least 10 points");
    if (!(spec.grid.lo > 0.0 && spec.grid.hi > spec.grid.lo && std::isfinite(spec.grid.hi)))
        throw ValidationError("generator grid range must be positive and increasing");
    if (!(spec.noise_pct >= 0.0 && std::isfinite(spec.noise_pct)))
        throw ValidationError("noise_pct must be non-negative");
    if (!(spec.grid_jitter >= 0.0 && spec.grid_jitter < 1.0))
        throw ValidationError("grid_jitter must lie in [0, 1)");
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ScalingLawModel>) {
                if (!(m.ln_re > 0.0)) throw ValidationError("scaling_law: ln_re must be positive");
            } else if constexpr (std::is_same_v<M, LogLawModel>) {
                if (!(m.kappa > 0.0)) throw ValidationError("log_law: kappa must be positive");
            } else {
                if (!(m.a > 0.0)) throw ValidationError("two_segment: a must be positive");
                if (!(m.breakpoint > spec.grid.lo && m.breakpoint < spec.grid.hi))
                    throw ValidationError("two_segment: breakpoint must lie inside the grid");
            }
        },
        spec.model);
}

inline double model_velocity(const GeneratorModel& model, double y) {
    return std::visit(
        [y](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ScalingLawModel>) {
                return scaling_law_velocity(m.ln_re, y, m.constants);
            } else if constexpr (std::is_same_v<M, LogLawModel>) {
                return std::log(y) / m.kappa + m.b;
            } else {
                return y <= m.breakpoint ? m.a * std::pow(y, m.alpha)
                                         : m.region2_amplitude() * std::pow(y, m.beta);
            }
        },
        model);
}

}  // namespace detail

inline VelocityProfile generate(const GeneratorSpec& spec) {
    detail::validate_spec(spec);
    NormalStream rng(spec.seed);

    const std::size_t n = spec.grid.count;
    const double ln_lo = std::log(spec.grid.lo);
    const double ln_hi = std::log(spec.grid.hi);
    const double step = (ln_hi - ln_lo) / static_cast<double>(n - 1);

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = ln_lo + step * static_cast<double>(i);
        if (i > 0 && i + 1 < n && spec.grid_jitter > 0.0)
            t += (rng.uniform() - 0.5) * spec.grid_jitter * step;
        ys[i] = (i == 0) ? spec.grid.lo : (i + 1 == n) ? spec.grid.hi : std::exp(t);
    }

    if (const auto* two = std::get_if<TwoSegmentModel>(&spec.model)) {
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(std::log(ys[i] / two->breakpoint)) <
                std::abs(std::log(ys[nearest] / two->breakpoint)))
                nearest = i;
        ys[nearest] = two->breakpoint;
    }

    const double sigma = spec.noise_pct / 100.0;
    std::vector<ProfilePoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = detail::model_velocity(spec.model, ys[i]);
        if (sigma > 0.0) u *= std::exp(sigma * rng.normal());
        pts[i] = {ys[i], u};
    }
    return VelocityProfile::from_wall_units(spec.meta, std::move(pts));
}

}  // namespace wallscale
