#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "outlier_perf/errors.hpp"
#include "outlier_perf/indicators.hpp"
#include "outlier_perf/outliers.hpp"
#include "outlier_perf/random.hpp"
#include "outlier_perf/record.hpp"
#include "outlier_perf/stats.hpp"

namespace outlier_perf::fixtures {

struct ValueRange {
    double lo;
    double hi;
};

struct DirectionCounts {
    int increase = 0;
    int decrease = 0;
    int flat = 0;
};

/// Forces one firm's ratio to sit `z` standard deviations (of the other
/// firms' values on that ratio) away from their mean.
struct PlantedOutlier {
    std::size_t firm;
    RatioId indicator;
    double z;
};

struct FixtureSpec {
    std::size_t firms = 62;
    std::uint64_t seed = 7;
    ValueRange tta{50.0, 5000.0};         // log-uniform first-year TTA
    ValueRange tta_change{1.05, 2.0};     // last/first (or first/last) pre-window factor
    std::array<ValueRange, kIndicatorKindCount> perf{{{-0.2, 0.6}, {-0.15, 0.8}, {-0.08, 0.3}, {-0.3, 0.25}}};
    std::optional<DirectionCounts> directions;
    std::vector<PlantedOutlier> planted;
    DatasetConfig dataset{};
};

namespace detail {

inline void check_spec(const FixtureSpec& spec) {
    if (spec.firms == 0) throw InfeasibleConstraints("fixture needs at least one firm");
    if (spec.dataset.pre_window() < 2 || spec.dataset.post_window() < 1) {
        throw InfeasibleConstraints("fixture windows must be pre >= 2, post >= 1");
    }
    if (!(spec.tta.lo > 0.0) || spec.tta.hi < spec.tta.lo) throw InfeasibleConstraints("TTA range must be positive");
    if (!(spec.tta_change.lo > 1.0) || spec.tta_change.hi < spec.tta_change.lo) {
        throw InfeasibleConstraints("TTA change factor range must lie above 1");
    }
    for (const auto& r : spec.perf) {
        if (r.hi < r.lo) throw InfeasibleConstraints("performance range is inverted");
    }
    if (const auto& d = spec.directions) {
        if (d->increase < 0 || d->decrease < 0 || d->flat < 0 ||
            static_cast<std::size_t>(d->increase + d->decrease + d->flat) != spec.firms) {
            throw InfeasibleConstraints("direction counts must be non-negative and sum to the firm count");
        }
    }
    std::array<bool, kIndicatorKindCount> kind_used{};
    for (const auto& p : spec.planted) {
        if (p.firm >= spec.firms) throw InfeasibleConstraints("planted firm index out of range");
        if (spec.firms < 3) throw InfeasibleConstraints("planting needs at least 3 firms");
        if (!std::isfinite(p.z)) throw InfeasibleConstraints("planted z must be finite");
        auto& used = kind_used[static_cast<std::size_t>(p.indicator.kind)];
        if (used) throw InfeasibleConstraints("at most one planted outlier per indicator kind");
        used = true;
    }
}

inline std::string padded(std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%03zu", i + 1);
    return buf;
}

inline void fill_window(std::vector<double>& out, std::size_t n, double average) {
    out.assign(n, average);
}

}  // namespace detail

/// Deterministic synthetic panel. Every firm draws from its own stream
/// derived from (seed, firm index), so the result is a pure function of the
/// spec.
inline std::vector<CompanyRecord> generate(const FixtureSpec& spec) {
    detail::check_spec(spec);
    const auto& cfg = spec.dataset;
    constexpr std::array<const char*, 6> sectors{"Technology", "Media", "Utilities", "Industrial goods & Services",
                                                 "Telecommunications", "Automobiles & Parts"};

    std::vector<std::optional<Direction>> forced(spec.firms);
    if (const auto& d = spec.directions) {
        std::vector<Direction> pool;
        pool.insert(pool.end(), static_cast<std::size_t>(d->increase), Direction::increase);
        pool.insert(pool.end(), static_cast<std::size_t>(d->decrease), Direction::decrease);
        pool.insert(pool.end(), static_cast<std::size_t>(d->flat), Direction::flat);
        PinnedRng shuffle(mix_seed(spec.seed, UINT64_MAX));
        for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[shuffle.below(i)]);
        for (std::size_t i = 0; i < spec.firms; ++i) forced[i] = pool[i];
    }

    std::vector<CompanyRecord> records(spec.firms);
    for (std::size_t i = 0; i < spec.firms; ++i) {
        PinnedRng rng(mix_seed(spec.seed, i));
        auto& rec = records[i];
        rec.firm_id = "F" + detail::padded(i);
        rec.name = "Firm " + detail::padded(i);
        rec.sector = sectors[rng.below(sectors.size())];

        const double first = std::exp(rng.uniform(std::log(spec.tta.lo), std::log(spec.tta.hi)));
        const Direction dir = forced[i].value_or(rng.uniform() < 0.5 ? Direction::increase : Direction::decrease);
        const double factor = rng.uniform(spec.tta_change.lo, spec.tta_change.hi);
        double last = first;
        if (dir == Direction::increase) last = first * factor;
        if (dir == Direction::decrease) last = first / factor;
        const std::size_t pre = cfg.pre_window();
        rec.tta_pre.resize(pre);
        rec.tta_pre.front() = first;
        rec.tta_pre.back() = last;
        for (std::size_t y = 1; y + 1 < pre; ++y) rec.tta_pre[y] = rng.uniform(std::min(first, last), std::max(first, last));

        for (auto kind : kIndicatorKinds) {
            const auto range = spec.perf[static_cast<std::size_t>(kind)];
            auto& values = rec.perf(kind);
            for (std::size_t y = 0; y < cfg.post_window(); ++y) values.push_back(rng.uniform(range.lo, range.hi));
        }
    }

    // Planted indicators: the other firms get ratios spread uniformly over a
    // bounded band so none of them can stray far out, then the planted firm
    // is placed at mean + z*sd of that band.
    for (const auto& plant : spec.planted) {
        const auto kind = plant.indicator.kind;
        const auto range = spec.perf[static_cast<std::size_t>(kind)];
        const double scale = 1.0 / std::sqrt(spec.tta.lo * spec.tta.hi);
        PinnedRng rng(mix_seed(spec.seed ^ 0xA5A5A5A5ULL, plant.indicator.index()));
        std::vector<double> others;
        for (std::size_t i = 0; i < spec.firms; ++i) {
            if (i == plant.firm) continue;
            const double target = rng.uniform(range.lo, range.hi) * scale;
            const auto profile = derive_tta_profile(records[i].tta_pre, cfg.pre_window());
            detail::fill_window(records[i].perf(kind), cfg.post_window(),
                                target * denominator_value(profile, plant.indicator.denominator));
            others.push_back(efficiency_matrix(records[i]).at(plant.indicator));
        }
        const auto s = summarize(others);
        const double target = s.mean + plant.z * s.stdev;
        const auto profile = derive_tta_profile(records[plant.firm].tta_pre, cfg.pre_window());
        detail::fill_window(records[plant.firm].perf(kind), cfg.post_window(),
                            target * denominator_value(profile, plant.indicator.denominator));
    }
    return records;
}

/// Published outlier-table values for the four named firms and the interval
/// table they were screened against. Literal values only; the underlying
/// 62-firm panel was never released.
struct Table4Fixture {
    struct Firm {
        std::string id;
        std::string name;
    };
    struct IntervalRow {
        double mean;
        double stdev;
        double lower;
        double upper;
    };

    std::array<Firm, 4> firms;
    /// values[indicator][firm], indicators in kRatioNames order.
    std::array<std::array<double, 4>, kRatioCount> values;
    /// true where the table prints the value bare (an outlier), false where
    /// it is in parentheses.
    std::array<std::array<bool, 4>, kRatioCount> printed_bare;
    std::array<IntervalRow, kRatioCount> intervals;

    [[nodiscard]] std::size_t firm_column(std::string_view name) const {
        for (std::size_t i = 0; i < firms.size(); ++i) {
            if (firms[i].name == name || firms[i].id == name) return i;
        }
        throw std::out_of_range("unknown fixture firm '" + std::string(name) + "'");
    }
};

inline const Table4Fixture& table4_fixture() {
    static const Table4Fixture fx{
        {{{"11", "Buongiorno"}, {"13", "Cairo Communication"}, {"58", "Ternienergia"}, {"45", "Mondo TV"}}},
        {{
            {0.4795, 0.0186, 0.4457, 0.0769},
            {-0.1155, -0.0217, 0.5089, -0.0536},
            {0.1277, 0.1573, 0.0345, -0.0130},
            {0.1623, 0.1228, 0.0436, -0.2466},
            {0.1537, 0.0087, 0.3962, 0.0382},
            {-0.0370, -0.0101, 0.4524, -0.0266},
            {0.0409, 0.0733, 0.0306, -0.0065},
            {0.0520, 0.0573, 0.0388, -0.1226},
            {0.2328, 0.0118, 0.4195, 0.0511},
            {-0.0561, -0.0138, 0.4790, -0.0356},
            {0.0620, 0.1000, 0.0324, -0.0872},
            {0.0788, 0.0781, 0.0410, -0.1638},
        }},
        {{
            {true, false, true, false},
            {false, false, true, false},
            {true, true, false, false},
            {true, true, false, true},
            {true, false, true, false},
            {false, false, true, false},
            {true, true, true, false},
            {true, true, false, false},
            {true, false, true, false},
            {false, false, true, false},
            {true, true, false, false},
            {true, true, false, false},
        }},
        {{
            {1.8713e-2, 0.082777, -0.14684, 0.18427},
            {7.2064e-3, 0.067471, -0.12774, 0.14215},
            {6.4631e-3, 0.026115, -0.045767, 0.058693},
            {2.4721e-3, 0.041382, -0.080291, 0.085235},
            {1.0849e-2, 0.053792, -0.096734, 0.11843},
            {7.7854e-3, 0.058099, -0.10841, 0.12398},
            {3.0546e-3, 0.011271, -0.019488, 0.025597},
            {1.2058e-3, 0.019334, -0.037463, 0.039874},
            {1.3055e-2, 0.060710, -0.10836, 0.13447},
            {7.8741e-3, 0.061904, -0.11593, 0.13168},
            {3.9985e-3, 0.015403, -0.026808, 0.034805},
            {1.4520e-3, 0.025969, -0.050486, 0.053390},
        }},
    };
    return fx;
}

/// Screens the fixture values against the published bounds (k = 2).
inline OutlierReport table4_report() {
    const auto& fx = table4_fixture();
    std::vector<std::string> ids;
    for (const auto& f : fx.firms) ids.push_back(f.id);
    std::vector<IndicatorInput> inputs;
    for (std::size_t i = 0; i < kRatioCount; ++i) {
        const auto& row = fx.intervals[i];
        OutlierInterval iv{row.mean, row.stdev, 2.0, row.lower, row.upper};
        inputs.push_back({std::string(kRatioNames[i]), ratio_label(RatioId::from_index(i)), std::nullopt, iv,
                          {fx.values[i].begin(), fx.values[i].end()}});
    }
    auto report = assemble_report(std::move(ids), std::move(inputs), 2.0);
    for (std::size_t f = 0; f < fx.firms.size(); ++f) report.firms[f].name = fx.firms[f].name;
    return report;
}

}  // namespace outlier_perf::fixtures
