#pragma once

/*
 * Profile file formats.
 *
 * Canonical format (UTF-8 text):
 *
 *   # label = run-042
 *   # re_theta = 20567
 *   # u_free = 15.2
 *   # u_tau = 0.52
 *   # nu = 1.5e-05
 *   # momentum_thickness = 0.0203     (optional)
 *   # units = wall                    (or "dimensional")
 *
 *   <y_plus>\t<u_plus>
 *   ...
 *
 * The header is the leading run of '#' lines and ends at the first blank
 * line. With units = dimensional the rows are y [m] and u [m/s] and are
 * converted to wall units on load. Later '#' lines are comments. The writer
 * always emits wall units with 17 significant digits.
 *
 * Whitespace-table format: headerless rows of at least two numeric columns
 * (extra columns ignored); metadata comes from the caller.
 */

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wallscale/errors.hpp"
#include "wallscale/profile.hpp"

namespace wallscale {

enum class ProfileFormat { canonical, whitespace_table };

using MetadataMap = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double metadata_number(const MetadataMap& m, std::string_view key) {
    const auto it = m.find(key);
    double v = 0.0;
    if (!parse_double(it->second, v))
        throw ValidationError("metadata '" + std::string(key) + "' is not a number: '" +
                              it->second + "'");
    return v;
}

}  // namespace detail

/// Builds RunMetadata from key/value strings; throws MissingMetadataError
/// listing every absent required key.
inline RunMetadata metadata_from_map(const MetadataMap& m) {
    std::vector<std::string> missing;
    for (const char* key : {"re_theta", "u_free", "u_tau", "nu"})
        if (!m.contains(key)) missing.emplace_back(key);
    if (!missing.empty()) throw MissingMetadataError(std::move(missing));

    RunMetadata meta;
    meta.re_theta = detail::metadata_number(m, "re_theta");
    meta.u_free = detail::metadata_number(m, "u_free");
    meta.u_tau = detail::metadata_number(m, "u_tau");
    meta.nu = detail::metadata_number(m, "nu");
    if (auto it = m.find("label"); it != m.end()) meta.label = it->second;
    if (m.contains("momentum_thickness"))
        meta.momentum_thickness = detail::metadata_number(m, "momentum_thickness");
    return meta;
}

/// Parses a profile. Entries in `overrides` replace header values (and are
/// the only metadata source for whitespace tables).
inline VelocityProfile parse_profile(std::istream& in, ProfileFormat format,
                                     const MetadataMap& overrides = {}) {
    MetadataMap meta_map;
    std::vector<double> col_y, col_u;
    bool in_header = format == ProfileFormat::canonical;
    std::size_t line_no = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = detail::trim(line);
        if (body.empty()) {
            in_header = false;
            continue;
        }
        if (body.front() == '#') {
            if (!in_header) continue;
            const auto content = body.substr(1);
            const auto eq = content.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = detail::trim(content.substr(0, eq));
            if (key.empty()) throw ParseError("empty header key", line_no);
            meta_map[std::string(key)] = std::string(detail::trim(content.substr(eq + 1)));
            continue;
        }
        in_header = false;

        const auto fields = detail::split_ws(body);
        const bool exact_two = format == ProfileFormat::canonical;
        if (fields.size() < 2 || (exact_two && fields.size() != 2))
            throw ParseError("expected two numeric columns, got " +
                                 std::to_string(fields.size()),
                             line_no);
        double y = 0.0, u = 0.0;
        if (!detail::parse_double(fields[0], y) || !std::isfinite(y))
            throw ParseError("malformed number '" + std::string(fields[0]) + "'", line_no);
        if (!detail::parse_double(fields[1], u) || !std::isfinite(u))
            throw ParseError("malformed number '" + std::string(fields[1]) + "'", line_no);
        if (!(y > 0.0)) throw ParseError("y_plus must be positive", line_no);
        if (!(u > 0.0)) throw ParseError("u_plus must be positive", line_no);
        col_y.push_back(y);
        col_u.push_back(u);
    }
    if (in.bad()) throw Error("read failure on profile stream");

    for (const auto& [k, v] : overrides) meta_map[k] = v;
    RunMetadata meta = metadata_from_map(meta_map);

    std::string units = "wall";
    if (auto it = meta_map.find("units"); it != meta_map.end()) units = it->second;
    if (units == "dimensional") return VelocityProfile::from_dimensional(std::move(meta), col_y, col_u);
    if (units != "wall") throw ValidationError("units must be 'wall' or 'dimensional', got '" + units + "'");

    std::vector<ProfilePoint> pts;
    pts.reserve(col_y.size());
    for (std::size_t i = 0; i < col_y.size(); ++i) pts.push_back({col_y[i], col_u[i]});
    return VelocityProfile::from_wall_units(std::move(meta), std::move(pts));
}

inline VelocityProfile parse_profile(std::string_view text, ProfileFormat format,
                                     const MetadataMap& overrides = {}) {
    std::istringstream in{std::string(text)};
    return parse_profile(in, format, overrides);
}

inline void write_profile(const VelocityProfile& profile, std::ostream& out) {
    using detail::format_g17;
    const auto& m = profile.meta();
    out << "# label = " << m.label << '\n'
        << "# re_theta = " << format_g17(m.re_theta) << '\n'
        << "# u_free = " << format_g17(m.u_free) << '\n'
        << "# u_tau = " << format_g17(m.u_tau) << '\n'
        << "# nu = " << format_g17(m.nu) << '\n';
    if (m.momentum_thickness)
        out << "# momentum_thickness = " << format_g17(*m.momentum_thickness) << '\n';
    out << "# units = wall\n\n";
    for (const auto& p : profile.points())
        out << format_g17(p.y_plus) << '\t' << format_g17(p.u_plus) << '\n';
    out.flush();
    if (!out) throw Error("write failure on profile sink");
}

inline std::string write_profile(const VelocityProfile& profile) {
    std::ostringstream out;
    write_profile(profile, out);
    return out.str();
}

}  // namespace wallscale
