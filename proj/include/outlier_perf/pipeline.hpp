#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "outlier_perf/errors.hpp"
#include "outlier_perf/indicators.hpp"
#include "outlier_perf/ingest.hpp"
#include "outlier_perf/outliers.hpp"
#include "outlier_perf/record.hpp"
#include "outlier_perf/report.hpp"
#include "outlier_perf/stats.hpp"

namespace outlier_perf {

/// Invalid run configuration (maps to the CLI usage exit code).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { markdown, csv, json };

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir = "out";
    double k = 2.0;
    MomentConventions conventions{};
    int systematic_threshold = 6;
    double near_miss_margin = 0.5;
    std::set<OutputFormat> formats{OutputFormat::markdown, OutputFormat::csv, OutputFormat::json};
    bool scatter = false;
    bool scatter_svg = false;
    bool stacked_tta = false;
    DatasetConfig dataset{};

    void validate() const {
        if (!(k > 0.0)) throw ConfigError("k must be > 0");
        if (systematic_threshold < 1 || systematic_threshold > static_cast<int>(kRatioCount)) {
            throw ConfigError("systematic threshold must be in 1..12");
        }
        if (!(near_miss_margin > 0.0 && near_miss_margin < 1.0)) throw ConfigError("near-miss margin must be in (0,1)");
        if (formats.empty()) throw ConfigError("at least one output format is required");
        if (input.empty()) throw ConfigError("an input path is required");
    }
};

/// Output file name -> contents. Ordered so writes happen in a fixed order.
using OutputTree = std::map<std::string, std::string>;

struct PipelineResult {
    std::vector<CompanyRecord> records;
    std::vector<EfficiencyMatrix> matrices;
    CrossSections sections;
    OutlierReport report;
    OutputTree outputs;
};

/// Runs the whole analysis in memory; nothing touches the filesystem except
/// reading the input.
inline PipelineResult analyze(const RunConfig& cfg) {
    cfg.validate();
    PipelineResult res;
    res.records = parse_dataset(cfg.input, cfg.dataset);
    res.matrices = efficiency_matrices(res.records);
    res.sections = cross_sections(res.matrices);
    res.report = detect_outliers(res.sections, cfg.k, cfg.conventions);
    for (std::size_t f = 0; f < res.records.size(); ++f) res.report.firms[f].name = res.records[f].name;

    std::vector<SummaryRow> baseline;
    for (std::size_t i = 0; i < res.sections.baseline.size(); ++i) {
        const auto& s = res.sections.baseline[i];
        baseline.push_back({s.name, baseline_label(i), summarize(s.values, cfg.conventions)});
    }
    std::vector<SummaryRow> ratios;
    for (std::size_t i = 0; i < kRatioCount; ++i) {
        const auto& s = res.sections.ratios[i];
        ratios.push_back({s.name, ratio_label(RatioId::from_index(i)), summarize(s.values, cfg.conventions)});
    }

    auto emit = [&](const std::string& stem, auto&& render) {
        if (cfg.formats.contains(OutputFormat::markdown)) res.outputs[stem + ".md"] = render(TableFormat::markdown);
        if (cfg.formats.contains(OutputFormat::csv)) res.outputs[stem + ".csv"] = render(TableFormat::csv);
    };
    emit("summary", [&](TableFormat f) { return render_summary_table(baseline, f); });
    emit("indicators", [&](TableFormat f) { return render_summary_table(ratios, f); });
    emit("intervals", [&](TableFormat f) { return render_interval_table(res.report, f); });
    emit("outliers", [&](TableFormat f) { return render_outlier_table(res.report, f); });
    if (cfg.formats.contains(OutputFormat::json)) {
        auto j = to_json(res.report, {cfg.systematic_threshold, cfg.near_miss_margin});
        const auto cohorts = direction_cohorts(res.records, res.report, cfg.systematic_threshold);
        ordered_json c = {{"increase", cohorts.increase}, {"decrease", cohorts.decrease}, {"flat", cohorts.flat}};
        ordered_json cross = ordered_json::array();
        for (const auto& [key, count] : cohorts.systematic_by_direction) {
            cross.push_back({{"polarity", to_string(key.first)}, {"direction", to_string(key.second)}, {"count", count}});
        }
        c["systematic_by_direction"] = std::move(cross);
        j["cohorts"] = std::move(c);
        res.outputs["report.json"] = j.dump(2) + "\n";
    }
    if (cfg.scatter || cfg.scatter_svg) {
        for (const auto& s : build_scatter_series(res.records, res.matrices, cfg.dataset)) {
            if (cfg.scatter) res.outputs[s.name + ".csv"] = render_scatter_csv(s);
            if (cfg.scatter_svg) res.outputs[s.name + ".svg"] = render_scatter_svg(s);
        }
    }
    if (cfg.stacked_tta) res.outputs["tta_stacked.csv"] = render_stacked_tta_csv(res.records);
    return res;
}

/// Writes every file to a hidden temporary next to its destination, then
/// renames them into place. If any write fails the temporaries are removed
/// and no destination file is touched.
inline void write_outputs_atomically(const std::filesystem::path& dir, const OutputTree& outputs) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError(DataErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::pair<fs::path, fs::path>> staged;
    auto cleanup = [&] {
        for (const auto& [tmp, dest] : staged) fs::remove(tmp, ec);
    };
    for (const auto& [name, content] : outputs) {
        const fs::path dest = dir / name;
        const fs::path tmp = dir / ("." + name + ".partial");
        staged.emplace_back(tmp, dest);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) {
            cleanup();
            throw DataError(DataErrorKind::io, "failed writing " + tmp.string());
        }
    }
    for (const auto& [tmp, dest] : staged) {
        fs::rename(tmp, dest, ec);
        if (ec) {
            cleanup();
            throw DataError(DataErrorKind::io, "cannot move " + tmp.string() + " into place: " + ec.message());
        }
    }
}

inline PipelineResult run_pipeline(const RunConfig& cfg) {
    auto res = analyze(cfg);
    write_outputs_atomically(cfg.output_dir, res.outputs);
    return res;
}

}  // namespace outlier_perf
