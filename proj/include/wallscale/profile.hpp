#pragma once

/*
 * Mean-velocity profile types in wall units.
 *
 * A profile is a set of (y+, U+) samples, y+ = u_tau*y/nu and U+ = u/u_tau,
 * together with the run parameters needed to turn fitted quantities back
 * into physical ones (free-stream velocity and viscosity for the effective
 * length scale, Re_theta as the run key).
 */

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wallscale/errors.hpp"

namespace wallscale {

struct ProfilePoint {
    double y_plus = 0.0;
    double u_plus = 0.0;

    friend bool operator==(const ProfilePoint&, const ProfilePoint&) = default;
};

/// Closed interval in y+.
struct Window {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double y) const noexcept { return y >= lo && y <= hi; }

    friend bool operator==(const Window&, const Window&) = default;
};

struct RunMetadata {
    double re_theta = 0.0;
    double u_free = 0.0;  // [m/s]
    double u_tau = 0.0;   // [m/s]
    double nu = 0.0;      // [m^2/s]
    std::string label;
    std::optional<double> momentum_thickness;  // theta [m]

    friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

inline void validate(const RunMetadata& meta) {
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            throw ValidationError(std::string(name) + " must be positive and finite");
    };
    positive(meta.re_theta, "re_theta");
    positive(meta.u_free, "u_free");
    positive(meta.u_tau, "u_tau");
    positive(meta.nu, "nu");
    if (meta.label.find_first_of("\r\n") != std::string::npos)
        throw ValidationError("label must be a single line");
    if (meta.momentum_thickness) {
        const double theta = *meta.momentum_thickness;
        positive(theta, "momentum_thickness");
        const double implied = meta.u_free * theta / meta.nu;
        if (std::abs(meta.re_theta - implied) / meta.re_theta >= 1e-6)
            throw ValidationError("re_theta inconsistent with u_free*momentum_thickness/nu");
    }
}

/// Immutable, validated profile. Points are strictly increasing in y+.
class VelocityProfile {
public:
    static constexpr std::size_t kMinPoints = 10;

    /// Builds a profile from wall-unit samples; throws ValidationError.
    static VelocityProfile from_wall_units(RunMetadata meta, std::vector<ProfilePoint> points) {
        validate(meta);
        if (points.size() < kMinPoints)
            throw ValidationError("profile has " + std::to_string(points.size()) +
                                  " points; at least " + std::to_string(kMinPoints) +
                                  " required (minimum-points invariant)");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            if (!(std::isfinite(p.y_plus) && p.y_plus > 0.0))
                throw ValidationError("y_plus must be positive and finite at point " +
                                      std::to_string(i));
            if (!(std::isfinite(p.u_plus) && p.u_plus > 0.0))
                throw ValidationError("u_plus must be positive and finite at point " +
                                      std::to_string(i));
            if (i > 0 && !(p.y_plus > points[i - 1].y_plus))
                throw ValidationError("y_plus not strictly increasing at point " +
                                      std::to_string(i));
        }
        return VelocityProfile(std::move(meta), std::move(points));
    }

    /// Builds a profile from dimensional samples, y [m] and u [m/s].
    static VelocityProfile from_dimensional(RunMetadata meta, std::span<const double> y,
                                            std::span<const double> u) {
        validate(meta);
        if (y.size() != u.size())
            throw ValidationError("dimensional columns differ in length");
        std::vector<ProfilePoint> pts;
        pts.reserve(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            pts.push_back({meta.u_tau * y[i] / meta.nu, u[i] / meta.u_tau});
        return from_wall_units(std::move(meta), std::move(pts));
    }

    const RunMetadata& meta() const noexcept { return meta_; }
    std::span<const ProfilePoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double y_plus_max() const noexcept { return points_.back().y_plus; }
    double y_plus_min() const noexcept { return points_.front().y_plus; }

    friend bool operator==(const VelocityProfile&, const VelocityProfile&) = default;

private:
    VelocityProfile(RunMetadata meta, std::vector<ProfilePoint> points)
        : meta_(std::move(meta)), points_(std::move(points)) {}

    RunMetadata meta_;
    std::vector<ProfilePoint> points_;
};

/// U+ = amplitude * (y+)^exponent, fitted in log-log coordinates.
struct PowerLawFit {
    double amplitude = 0.0;
    double exponent = 0.0;
    double stderr_amplitude = 0.0;
    double stderr_exponent = 0.0;
    double r_squared = 0.0;
    double sse = 0.0;  // in (ln y+, ln U+)
    std::size_t n_points = 0;
    Window window;
};

/// U+ = (1/kappa) ln y+ + B, fitted in semi-log coordinates.
struct LogLawFit {
    double kappa = 0.0;
    double intercept_b = 0.0;
    double stderr_kappa = 0.0;
    double stderr_b = 0.0;
    double r_squared = 0.0;
    double sse = 0.0;  // in (ln y+, U+)
    std::size_t n_points = 0;
    Window window;
};

/// Two independent power laws meeting at a breakpoint (the "broken line").
struct SegmentedFit {
    double breakpoint_y_plus = 0.0;
    PowerLawFit region1;  // A, alpha: adjacent to the viscous sublayer
    PowerLawFit region2;  // B, beta: adjacent to the free stream
    double total_sse = 0.0;

    /// False when region II is steeper than region I. Not an error.
    bool exponent_decreases() const noexcept { return region1.exponent > region2.exponent; }
};

inline double evaluate_power_law(const PowerLawFit& fit, double y_plus) {
    if (!(y_plus > 0.0)) throw DomainError("evaluate_power_law: y_plus must be positive");
    return fit.amplitude * std::pow(y_plus, fit.exponent);
}

inline double evaluate_log_law(const LogLawFit& fit, double y_plus) {
    if (!(y_plus > 0.0)) throw DomainError("evaluate_log_law: y_plus must be positive");
    return std::log(y_plus) / fit.kappa + fit.intercept_b;
}

}  // namespace wallscale
