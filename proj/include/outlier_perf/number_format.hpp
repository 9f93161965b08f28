#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace outlier_perf {

// All formatting goes through std::to_chars, which rounds the exact binary
// value correctly (ties to even) and ignores the C locale, so output is
// identical across runs and platforms.

/// Shortest representation that parses back to the same double.
inline std::string format_roundtrip(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

/// `digits` significant digits, scientific notation only for very small or
/// large magnitudes.
inline std::string format_significant(double v, int digits = 5) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
    return std::string(buf.data(), end);
}

/// Fixed-point with `decimals` places.
inline std::string format_fixed(double v, int decimals) {
    std::array<char, 128> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return format_significant(v, decimals + 1);
    std::string out(buf.data(), end);
    if (out.find_first_not_of("-0.") == std::string::npos && out.front() == '-') out.erase(0, 1);
    return out;
}

/// Strict decimal parse: the whole field must be consumed and the value
/// finite. Leading/trailing blanks are tolerated.
inline std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace outlier_perf
