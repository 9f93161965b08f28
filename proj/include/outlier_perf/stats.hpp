#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "outlier_perf/errors.hpp"

namespace outlier_perf {

enum class StdevMode { sample, population };
enum class ShapeMode { adjusted, population };
enum class KurtosisBasis { excess, raw };

/// Estimator choices for summarize(). Defaults: n-1 divisor, bias-adjusted
/// shape statistics (spreadsheet SKEW/KURT), excess kurtosis.
struct MomentConventions {
    StdevMode stdev = StdevMode::sample;
    ShapeMode shape = ShapeMode::adjusted;
    KurtosisBasis kurtosis = KurtosisBasis::excess;

    friend bool operator==(const MomentConventions&, const MomentConventions&) = default;
};

inline const char* to_string(StdevMode m) { return m == StdevMode::sample ? "sample" : "population"; }
inline const char* to_string(ShapeMode m) { return m == ShapeMode::adjusted ? "adjusted" : "population"; }
inline const char* to_string(KurtosisBasis b) { return b == KurtosisBasis::excess ? "excess" : "raw"; }

/// Smallest sample size for which each shape statistic is defined.
inline constexpr std::size_t min_n_skewness(ShapeMode m) { return m == ShapeMode::adjusted ? 3 : 2; }
inline constexpr std::size_t min_n_kurtosis(ShapeMode m) { return m == ShapeMode::adjusted ? 4 : 2; }

/// Moment summary of one cross-sectional sample. Skewness and kurtosis are
/// empty when undefined (constant sample, or n below the convention minimum).
struct DistributionSummary {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double sum = 0.0;
    double mean = 0.0;
    double stdev = 0.0;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
    MomentConventions conventions{};
};

/// Summarizes a non-empty sample. A one-element or constant sample has
/// stdev exactly 0 under either divisor.
inline DistributionSummary summarize(std::span<const double> sample, const MomentConventions& conv = {}) {
    if (sample.empty()) throw StatsError(StatsError::Kind::empty_sample, "summarize: empty sample");

    DistributionSummary s;
    s.conventions = conv;
    s.n = sample.size();
    const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
    s.min = *lo;
    s.max = *hi;
    for (double x : sample) s.sum += x;
    const double n = static_cast<double>(s.n);

    if (s.min == s.max) {
        s.mean = s.min;
        return s;
    }
    s.mean = std::clamp(s.sum / n, s.min, s.max);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : sample) {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double ss = m2;
    m2 /= n;
    m3 /= n;
    m4 /= n;

    s.stdev = conv.stdev == StdevMode::sample ? std::sqrt(ss / (n - 1.0)) : std::sqrt(m2);

    const double g1 = m3 / std::pow(m2, 1.5);
    const double g2 = m4 / (m2 * m2) - 3.0;

    if (s.n >= min_n_skewness(conv.shape)) {
        s.skewness = conv.shape == ShapeMode::adjusted ? g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0) : g1;
    }
    if (s.n >= min_n_kurtosis(conv.shape)) {
        double excess = g2;
        if (conv.shape == ShapeMode::adjusted) excess = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
        s.kurtosis = conv.kurtosis == KurtosisBasis::excess ? excess : excess + 3.0;
    }
    return s;
}

/// Signed sigma/mu.
inline double coefficient_of_variation(const DistributionSummary& s) {
    if (s.mean == 0.0) throw StatsError(StatsError::Kind::zero_mean, "coefficient_of_variation: mean is zero");
    return s.stdev / s.mean;
}

/// Open interval ]mean - k*stdev, mean + k*stdev[.
struct OutlierInterval {
    double mean = 0.0;
    double stdev = 0.0;
    double k = 2.0;
    double lower = 0.0;
    double upper = 0.0;

    /// Distance from the centre to either bound.
    [[nodiscard]] double half_width() const noexcept { return 0.5 * (upper - lower); }
};

inline OutlierInterval interval(double mean, double stdev, double k) {
    if (!(stdev >= 0.0)) throw StatsError(StatsError::Kind::negative_stdev, "interval: stdev must be >= 0");
    if (!(k > 0.0)) throw StatsError(StatsError::Kind::non_positive_k, "interval: k must be > 0");
    const double h = k * stdev;
    return {mean, stdev, k, mean - h, mean + h};
}

inline double zscore(double value, const DistributionSummary& s) {
    if (!(s.stdev > 0.0)) throw StatsError(StatsError::Kind::zero_stdev, "zscore: stdev is zero");
    return (value - s.mean) / s.stdev;
}

}  // namespace outlier_perf
