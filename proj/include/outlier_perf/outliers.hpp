#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "outlier_perf/indicators.hpp"
#include "outlier_perf/record.hpp"
#include "outlier_perf/stats.hpp"

namespace outlier_perf {

enum class ClassKind { negative_outlier, inlier, positive_outlier };

inline const char* to_string(ClassKind c) {
    switch (c) {
        case ClassKind::negative_outlier: return "negative_outlier";
        case ClassKind::inlier: return "inlier";
        case ClassKind::positive_outlier: return "positive_outlier";
    }
    return "inlier";
}

struct Classification {
    ClassKind kind = ClassKind::inlier;
    double value = 0.0;
    OutlierInterval interval;
};

/// Membership in the open interval: a value sitting exactly on a bound is an
/// outlier.
inline Classification classify(double value, const OutlierInterval& iv) {
    ClassKind kind = ClassKind::inlier;
    if (value <= iv.lower) {
        kind = ClassKind::negative_outlier;
    } else if (value >= iv.upper) {
        kind = ClassKind::positive_outlier;
    }
    return {kind, value, iv};
}

/// Classified cross-section of one indicator.
struct IndicatorResult {
    std::string name;
    std::string label;
    std::optional<DistributionSummary> summary;  // absent when only (mu, sigma) are known
    OutlierInterval interval;
    std::vector<double> values;     // one per firm, report firm order
    std::vector<ClassKind> classes;  // parallel to values
};

struct DegenerateIndicator {
    std::string name;
    std::string reason;
};

struct FirmTally {
    std::string firm_id;
    std::string name;
    int positive_count = 0;
    int negative_count = 0;
    std::optional<Direction> direction;

    [[nodiscard]] bool is_flagged() const noexcept { return positive_count + negative_count > 0; }
};

struct OutlierReport {
    double k = 2.0;
    MomentConventions conventions{};
    std::vector<IndicatorResult> indicators;
    std::vector<DegenerateIndicator> degenerate;
    std::vector<FirmTally> firms;

    [[nodiscard]] const IndicatorResult* find(std::string_view name) const {
        for (const auto& r : indicators) {
            if (r.name == name) return &r;
        }
        return nullptr;
    }
    [[nodiscard]] std::optional<std::size_t> firm_index(std::string_view firm_id) const {
        for (std::size_t i = 0; i < firms.size(); ++i) {
            if (firms[i].firm_id == firm_id) return i;
        }
        return std::nullopt;
    }
};

/// Input for assemble_report: one indicator whose interval is already known.
struct IndicatorInput {
    std::string name;
    std::string label;
    std::optional<DistributionSummary> summary;
    OutlierInterval interval;
    std::vector<double> values;
};

/// Classifies every value against its indicator interval and tallies
/// per-firm counts. Used directly when intervals come from elsewhere
/// (published tables) rather than from the data itself.
inline OutlierReport assemble_report(std::vector<std::string> firm_ids, std::vector<IndicatorInput> inputs, double k,
                                     const MomentConventions& conv = {}) {
    OutlierReport report;
    report.k = k;
    report.conventions = conv;
    for (auto& id : firm_ids) report.firms.push_back({std::move(id), {}, 0, 0, std::nullopt});
    for (auto& in : inputs) {
        if (in.values.size() != report.firms.size()) {
            throw std::invalid_argument("assemble_report: indicator '" + in.name + "' has " +
                                        std::to_string(in.values.size()) + " values for " +
                                        std::to_string(report.firms.size()) + " firms");
        }
        IndicatorResult r{std::move(in.name), std::move(in.label), std::move(in.summary), in.interval,
                          std::move(in.values), {}};
        r.classes.reserve(r.values.size());
        for (std::size_t f = 0; f < r.values.size(); ++f) {
            const auto c = classify(r.values[f], r.interval).kind;
            r.classes.push_back(c);
            if (c == ClassKind::positive_outlier) ++report.firms[f].positive_count;
            if (c == ClassKind::negative_outlier) ++report.firms[f].negative_count;
        }
        report.indicators.push_back(std::move(r));
    }
    return report;
}

/// Screens the 12 efficiency-ratio cross-sections at mu +/- k*sigma.
/// Indicators with n < 2 or sigma = 0 are listed in `degenerate` and
/// excluded from classification and counts.
inline OutlierReport detect_outliers(const CrossSections& cs, double k = 2.0, const MomentConventions& conv = {}) {
    if (!(k > 0.0)) throw StatsError(StatsError::Kind::non_positive_k, "detect_outliers: k must be > 0");
    std::vector<IndicatorInput> inputs;
    std::vector<DegenerateIndicator> degenerate;
    for (std::size_t i = 0; i < kRatioCount; ++i) {
        const auto& sample = cs.ratios[i];
        auto summary = summarize(sample.values, conv);
        if (summary.n < 2 || !(summary.stdev > 0.0)) {
            degenerate.push_back(
                {sample.name, summary.n < 2 ? "fewer than 2 firms" : "zero standard deviation"});
            continue;
        }
        const auto iv = interval(summary.mean, summary.stdev, k);
        inputs.push_back({sample.name, ratio_label(RatioId::from_index(i)), std::move(summary), iv, sample.values});
    }
    auto report = assemble_report(cs.firm_ids, std::move(inputs), k, conv);
    report.degenerate = std::move(degenerate);
    for (std::size_t f = 0; f < report.firms.size() && f < cs.directions.size(); ++f) {
        report.firms[f].direction = cs.directions[f];
    }
    return report;
}

enum class Polarity { positive, negative, mixed };

inline const char* to_string(Polarity p) {
    switch (p) {
        case Polarity::positive: return "positive";
        case Polarity::negative: return "negative";
        case Polarity::mixed: return "mixed";
    }
    return "mixed";
}

struct SystematicOutlier {
    std::string firm_id;
    Polarity polarity;
    int positive_count;
    int negative_count;

    friend bool operator==(const SystematicOutlier&, const SystematicOutlier&) = default;
};

inline std::optional<Polarity> systematic_polarity(const FirmTally& f, int threshold) {
    const int pos = f.positive_count;
    const int neg = f.negative_count;
    if (std::max(pos, neg) < threshold) return std::nullopt;
    if (neg == 0) return Polarity::positive;
    if (pos == 0) return Polarity::negative;
    return Polarity::mixed;
}

/// Firms reaching `threshold` outlier cells of one polarity. Firms that also
/// have cells of the other polarity come back as `mixed` with both counts.
inline std::vector<SystematicOutlier> systematic_outliers(const OutlierReport& report, int threshold = 6) {
    if (threshold < 1 || threshold > static_cast<int>(kRatioCount)) {
        throw std::invalid_argument("systematic_outliers: threshold must be in 1..12");
    }
    std::vector<SystematicOutlier> out;
    for (const auto& f : report.firms) {
        if (auto p = systematic_polarity(f, threshold)) {
            out.push_back({f.firm_id, *p, f.positive_count, f.negative_count});
        }
    }
    return out;
}

struct NearMiss {
    std::string firm_id;
    std::string indicator;
    double value;
    double distance;  // to the nearer bound
};

/// Inlier cells of already-flagged firms lying within margin * (k*sigma)
/// of a bound.
inline std::vector<NearMiss> near_misses(const OutlierReport& report, double margin = 0.5) {
    if (!(margin > 0.0 && margin < 1.0)) throw std::invalid_argument("near_misses: margin must be in (0,1)");
    std::vector<NearMiss> out;
    for (std::size_t f = 0; f < report.firms.size(); ++f) {
        if (!report.firms[f].is_flagged()) continue;
        for (const auto& ind : report.indicators) {
            if (ind.classes[f] != ClassKind::inlier) continue;
            const double v = ind.values[f];
            const double distance = std::min(v - ind.interval.lower, ind.interval.upper - v);
            if (distance <= margin * ind.interval.half_width()) {
                out.push_back({report.firms[f].firm_id, ind.name, v, distance});
            }
        }
    }
    return out;
}

struct CohortSummary {
    int increase = 0;
    int decrease = 0;
    int flat = 0;
    /// Systematic outliers broken down by TTA direction.
    std::map<std::pair<Polarity, Direction>, int> systematic_by_direction;

    [[nodiscard]] int total() const noexcept { return increase + decrease + flat; }
};

inline CohortSummary direction_cohorts(std::span<const CompanyRecord> records, const OutlierReport& report,
                                       int threshold = 6) {
    CohortSummary c;
    std::map<std::string, Direction, std::less<>> by_firm;
    for (const auto& r : records) {
        const auto dir = derive_tta_profile(r.tta_pre, r.tta_pre.size()).direction;
        by_firm[r.firm_id] = dir;
        switch (dir) {
            case Direction::increase: ++c.increase; break;
            case Direction::decrease: ++c.decrease; break;
            case Direction::flat: ++c.flat; break;
        }
    }
    if (!report.firms.empty()) {
        for (const auto& s : systematic_outliers(report, threshold)) {
            if (auto it = by_firm.find(s.firm_id); it != by_firm.end()) ++c.systematic_by_direction[{s.polarity, it->second}];
        }
    }
    return c;
}

}  // namespace outlier_perf
