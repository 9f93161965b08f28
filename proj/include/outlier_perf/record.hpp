#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace outlier_perf {

/// The four post-window performance indicators: sales variation, total
/// assets variation, return on investments and return on sales.
enum class IndicatorKind : std::size_t { ds = 0, da = 1, roi = 2, ros = 3 };

inline constexpr std::size_t kIndicatorKindCount = 4;
inline constexpr std::array<IndicatorKind, kIndicatorKindCount> kIndicatorKinds{
    IndicatorKind::ds, IndicatorKind::da, IndicatorKind::roi, IndicatorKind::ros};

inline constexpr std::string_view kind_name(IndicatorKind kind) {
    constexpr std::array<std::string_view, kIndicatorKindCount> names{"ds", "da", "roi", "ros"};
    return names[static_cast<std::size_t>(kind)];
}

/// One firm's raw panel. Investment values cover the pre-window, indicator
/// values the post-window, both in chronological order.
struct CompanyRecord {
    std::string firm_id;
    std::string name;
    std::string sector;
    std::vector<double> tta_pre;
    std::array<std::vector<double>, kIndicatorKindCount> perf_post;

    [[nodiscard]] const std::vector<double>& perf(IndicatorKind kind) const {
        return perf_post[static_cast<std::size_t>(kind)];
    }
    [[nodiscard]] std::vector<double>& perf(IndicatorKind kind) {
        return perf_post[static_cast<std::size_t>(kind)];
    }

    friend bool operator==(const CompanyRecord&, const CompanyRecord&) = default;
};

/// Year labels for the two windows. The window lengths are the label counts,
/// so they cannot disagree.
struct DatasetConfig {
    std::vector<std::string> pre_years{"2006", "2007"};
    std::vector<std::string> post_years{"2008", "2009", "2010"};

    [[nodiscard]] std::size_t pre_window() const noexcept { return pre_years.size(); }
    [[nodiscard]] std::size_t post_window() const noexcept { return post_years.size(); }

    /// Header columns in canonical order.
    [[nodiscard]] std::vector<std::string> columns() const {
        std::vector<std::string> cols{"firm_id", "name", "sector"};
        for (const auto& y : pre_years) cols.push_back("tta_" + y);
        for (auto kind : kIndicatorKinds) {
            for (const auto& y : post_years) cols.push_back(std::string(kind_name(kind)) + "_" + y);
        }
        return cols;
    }
};

}  // namespace outlier_perf
