#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outlier_perf/errors.hpp"
#include "outlier_perf/record.hpp"

namespace outlier_perf {

enum class Direction { increase, decrease, flat };

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::increase: return "increase";
        case Direction::decrease: return "decrease";
        case Direction::flat: return "flat";
    }
    return "flat";
}

/// Pre-window investment summary.
struct TtaProfile {
    double tta_min = 0.0;   // TTAm
    double tta_max = 0.0;   // TTAM
    double tta_mean = 0.0;  // <TTA>_2 for the default two-year window
    Direction direction = Direction::flat;
};

inline TtaProfile derive_tta_profile(std::span<const double> tta_pre, std::size_t pre_window = 2) {
    if (tta_pre.size() != pre_window || pre_window < 2) {
        throw DataError(DataErrorKind::wrong_window_length,
                        "expected " + std::to_string(pre_window) + " (>= 2) TTA values, got " +
                            std::to_string(tta_pre.size()));
    }
    for (double v : tta_pre) {
        if (!(v > 0.0)) throw DataError(DataErrorKind::non_positive_tta, "TTA values must be > 0");
    }
    TtaProfile p;
    const auto [lo, hi] = std::minmax_element(tta_pre.begin(), tta_pre.end());
    p.tta_min = *lo;
    p.tta_max = *hi;
    double sum = 0.0;
    for (double v : tta_pre) sum += v;
    p.tta_mean = std::clamp(sum / static_cast<double>(tta_pre.size()), p.tta_min, p.tta_max);
    const double first = tta_pre.front();
    const double last = tta_pre.back();
    p.direction = first < last ? Direction::increase : (first > last ? Direction::decrease : Direction::flat);
    return p;
}

/// Arithmetic mean over the post-window.
inline double time_average(std::span<const double> values, std::size_t post_window = 3) {
    if (values.size() != post_window || post_window == 0) {
        throw DataError(DataErrorKind::wrong_window_length,
                        "expected " + std::to_string(post_window) + " values, got " + std::to_string(values.size()));
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

/// Post-window averages per indicator kind.
struct PerformancePanel {
    std::array<double, kIndicatorKindCount> average{};

    [[nodiscard]] double operator[](IndicatorKind kind) const { return average[static_cast<std::size_t>(kind)]; }
};

enum class Denominator : std::size_t { tta_min = 0, tta_max = 1, tta_mean = 2 };

inline constexpr std::size_t kDenominatorCount = 3;
inline constexpr std::size_t kRatioCount = kIndicatorKindCount * kDenominatorCount;

/// Identifies one of the 12 efficiency ratios. Ordering groups by
/// denominator (TTAm, TTAM, <TTA>_2), each group listing DS, DA, ROI, ROS.
struct RatioId {
    IndicatorKind kind;
    Denominator denominator;

    [[nodiscard]] constexpr std::size_t index() const {
        return static_cast<std::size_t>(denominator) * kIndicatorKindCount + static_cast<std::size_t>(kind);
    }
    static constexpr RatioId from_index(std::size_t i) {
        return {static_cast<IndicatorKind>(i % kIndicatorKindCount),
                static_cast<Denominator>(i / kIndicatorKindCount)};
    }
};

inline constexpr std::array<std::string_view, kRatioCount> kRatioNames{
    "ds_over_ttam", "da_over_ttam", "roi_over_ttam", "ros_over_ttam",
    "ds_over_ttaM", "da_over_ttaM", "roi_over_ttaM", "ros_over_ttaM",
    "ds_over_tta2", "da_over_tta2", "roi_over_tta2", "ros_over_tta2",
};

/// Table-1 style variables: the three denominators and four averages.
inline constexpr std::array<std::string_view, 7> kBaselineNames{"ttam",   "ttaM",   "tta2",   "ds_avg",
                                                                "da_avg", "roi_avg", "ros_avg"};

inline constexpr std::string_view ratio_name(RatioId id) { return kRatioNames[id.index()]; }

/// Human-readable label, e.g. "<DS>_3/TTAm".
inline std::string ratio_label(RatioId id) {
    constexpr std::array<std::string_view, kIndicatorKindCount> kinds{"<DS>_3", "<DA>_3", "<ROI>_3", "<ROS>_3"};
    constexpr std::array<std::string_view, kDenominatorCount> dens{"TTAm", "TTAM", "<TTA>_2"};
    return std::string(kinds[static_cast<std::size_t>(id.kind)]) + "/" +
           std::string(dens[static_cast<std::size_t>(id.denominator)]);
}

inline std::string baseline_label(std::size_t i) {
    constexpr std::array<std::string_view, 7> labels{"TTAm",   "TTAM",   "<TTA>_2", "<DS>_3",
                                                     "<DA>_3", "<ROI>_3", "<ROS>_3"};
    return std::string(labels.at(i));
}

/// The 12 efficiency ratios of one firm, plus the profile and averages they
/// were built from.
struct EfficiencyMatrix {
    std::string firm_id;
    TtaProfile profile;
    PerformancePanel panel;
    std::array<double, kRatioCount> ratios{};

    [[nodiscard]] double at(RatioId id) const { return ratios[id.index()]; }
    [[nodiscard]] double at(IndicatorKind k, Denominator d) const { return at(RatioId{k, d}); }
};

inline double denominator_value(const TtaProfile& p, Denominator d) {
    switch (d) {
        case Denominator::tta_min: return p.tta_min;
        case Denominator::tta_max: return p.tta_max;
        case Denominator::tta_mean: return p.tta_mean;
    }
    return p.tta_mean;
}

inline EfficiencyMatrix efficiency_matrix(const CompanyRecord& record) {
    EfficiencyMatrix m;
    m.firm_id = record.firm_id;
    m.profile = derive_tta_profile(record.tta_pre, record.tta_pre.size());
    for (auto kind : kIndicatorKinds) {
        const auto& values = record.perf(kind);
        m.panel.average[static_cast<std::size_t>(kind)] = time_average(values, values.size());
    }
    for (std::size_t i = 0; i < kRatioCount; ++i) {
        const auto id = RatioId::from_index(i);
        m.ratios[i] = m.panel[id.kind] / denominator_value(m.profile, id.denominator);
    }
    return m;
}

struct NamedSample {
    std::string name;
    std::vector<double> values;
};

/// Per-indicator samples across firms, in input firm order.
struct CrossSections {
    std::vector<std::string> firm_ids;
    std::vector<Direction> directions;
    std::array<NamedSample, kRatioCount> ratios;
    std::array<NamedSample, kBaselineNames.size()> baseline;

    [[nodiscard]] const NamedSample& ratio(RatioId id) const { return ratios[id.index()]; }

    [[nodiscard]] const NamedSample* find(std::string_view name) const {
        for (const auto& s : ratios) {
            if (s.name == name) return &s;
        }
        for (const auto& s : baseline) {
            if (s.name == name) return &s;
        }
        return nullptr;
    }
};

inline CrossSections cross_sections(std::span<const EfficiencyMatrix> matrices) {
    if (matrices.empty()) throw DataError(DataErrorKind::empty_dataset, "cross_sections: no firms");
    CrossSections cs;
    for (std::size_t i = 0; i < kRatioCount; ++i) cs.ratios[i].name = std::string(kRatioNames[i]);
    for (std::size_t i = 0; i < kBaselineNames.size(); ++i) cs.baseline[i].name = std::string(kBaselineNames[i]);
    for (const auto& m : matrices) {
        cs.firm_ids.push_back(m.firm_id);
        cs.directions.push_back(m.profile.direction);
        for (std::size_t i = 0; i < kRatioCount; ++i) cs.ratios[i].values.push_back(m.ratios[i]);
        cs.baseline[0].values.push_back(m.profile.tta_min);
        cs.baseline[1].values.push_back(m.profile.tta_max);
        cs.baseline[2].values.push_back(m.profile.tta_mean);
        for (std::size_t k = 0; k < kIndicatorKindCount; ++k) cs.baseline[3 + k].values.push_back(m.panel.average[k]);
    }
    return cs;
}

inline std::vector<EfficiencyMatrix> efficiency_matrices(std::span<const CompanyRecord> records) {
    std::vector<EfficiencyMatrix> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(efficiency_matrix(r));
    return out;
}

}  // namespace outlier_perf
