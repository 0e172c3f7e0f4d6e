#pragma once

/*
 * Reynolds-number-dependent scaling law
 *
 *   U+ = (c1 ln Re + c2) (y+)^(c / ln Re),   c1 = 1/sqrt(3), c2 = 5/2, c = 3/2
 *
 * and its inversion: a fitted region-I power law U+ = A (y+)^alpha yields two
 * independent estimates of ln Re, one from the amplitude and one from the
 * exponent. Their mean defines the effective Reynolds number
 * Re = sqrt(Re1 Re2) and the length scale Lambda = nu Re / U.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "wallscale/errors.hpp"
#include "wallscale/profile.hpp"

namespace wallscale {

struct ScalingLawConstants {
    double c1 = 1.0 / std::numbers::sqrt3;
    double c2 = 2.5;
    double c = 1.5;
};

inline void validate(const ScalingLawConstants& k) {
    if (!(k.c1 > 0.0 && k.c2 > 0.0 && k.c > 0.0))
        throw ValidationError("scaling-law constants must be strictly positive");
}

/// Region-I amplitude A(ln Re) = c1 ln Re + c2.
inline double scaling_amplitude(double ln_re, const ScalingLawConstants& k = {}) {
    return k.c1 * ln_re + k.c2;
}

/// Region-I exponent alpha(ln Re) = c / ln Re.
inline double scaling_exponent(double ln_re, const ScalingLawConstants& k = {}) {
    if (!(ln_re > 0.0)) throw DomainError("scaling_exponent: ln_re must be positive");
    return k.c / ln_re;
}

/// Evaluates the law as written; the constants are not validated so that
/// degenerate choices (e.g. c1 = 0) can be evaluated.
inline double scaling_law_velocity(double ln_re, double y_plus,
                                   const ScalingLawConstants& k = {}) {
    if (!(ln_re > 0.0)) throw DomainError("scaling_law_velocity: ln_re must be positive");
    if (!(y_plus > 0.0)) throw DomainError("scaling_law_velocity: y_plus must be positive");
    return scaling_amplitude(ln_re, k) * std::pow(y_plus, k.c / ln_re);
}

/// ln Re1 from the amplitude: (A - c2) / c1.
inline double solve_ln_re1(double amplitude_a, const ScalingLawConstants& k = {}) {
    validate(k);
    if (!(amplitude_a > k.c2))
        throw NonPhysicalFitError("amplitude " + std::to_string(amplitude_a) +
                                  " does not exceed c2; ln Re1 would be non-positive");
    return (amplitude_a - k.c2) / k.c1;
}

/// ln Re2 from the exponent: c / alpha.
inline double solve_ln_re2(double exponent_alpha, const ScalingLawConstants& k = {}) {
    validate(k);
    if (!(exponent_alpha > 0.0))
        throw NonPhysicalFitError("exponent " + std::to_string(exponent_alpha) +
                                  " is not positive; ln Re2 undefined");
    return k.c / exponent_alpha;
}

struct ScalingSolution {
    double ln_re1 = 0.0;
    double ln_re2 = 0.0;
    double discrepancy_pct = 0.0;  // 100 |ln Re1 - ln Re2| / mean
    double ln_re_eff = 0.0;
    double re_eff = 0.0;
    double lambda_scale = 0.0;  // [m]
    std::optional<double> theta_over_lambda;
    bool close_enough = false;
};

inline constexpr double kDefaultClosenessPct = 3.0;

inline ScalingSolution effective_reynolds(double ln_re1, double ln_re2, const RunMetadata& meta,
                                          double threshold_pct = kDefaultClosenessPct) {
    if (!(ln_re1 > 0.0 && ln_re2 > 0.0))
        throw DomainError("effective_reynolds: ln Re1 and ln Re2 must be positive");
    ScalingSolution s;
    s.ln_re1 = ln_re1;
    s.ln_re2 = ln_re2;
    s.ln_re_eff = (ln_re1 + ln_re2) / 2.0;
    s.re_eff = std::exp(s.ln_re_eff);
    s.discrepancy_pct = 100.0 * std::abs(ln_re1 - ln_re2) / s.ln_re_eff;
    s.close_enough = s.discrepancy_pct <= threshold_pct;
    s.lambda_scale = meta.nu * s.re_eff / meta.u_free;
    if (meta.momentum_thickness) s.theta_over_lambda = *meta.momentum_thickness / s.lambda_scale;
    return s;
}

/// Region-II exponent correlation beta = 2 / ln Re + 0.01.
inline double beta_correlation(double ln_re) {
    if (!(ln_re > 0.0)) throw DomainError("beta_correlation: ln_re must be positive");
    return 2.0 / ln_re + 0.01;
}

}  // namespace wallscale
