#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "outlier_perf/indicators.hpp"
#include "outlier_perf/ingest.hpp"
#include "outlier_perf/number_format.hpp"
#include "outlier_perf/outliers.hpp"
#include "outlier_perf/record.hpp"
#include "outlier_perf/stats.hpp"

namespace outlier_perf {

enum class TableFormat { markdown, csv };

/// Significant digits used for human-readable distribution tables.
inline constexpr int kTableDigits = 5;
/// Decimal places for outlier-table cells.
inline constexpr int kOutlierDecimals = 4;

namespace detail {

inline std::string md_row(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    return out + "\n";
}

inline std::string md_rule(std::size_t n) {
    std::string out = "|";
    for (std::size_t i = 0; i < n; ++i) out += "---|";
    return out + "\n";
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv::quote(cells[i]);
    }
    return out + "\n";
}

inline std::string k_text(double k) { return format_roundtrip(k); }

}  // namespace detail

struct SummaryRow {
    std::string name;
    std::string label;
    DistributionSummary summary;
};

/// Min/max/sum/mean/stdev/skewness/kurtosis table with a trailing sigma/mu
/// column. Markdown uses 5 significant digits; CSV keeps full precision and
/// leaves undefined cells empty.
inline std::string render_summary_table(std::span<const SummaryRow> rows, TableFormat fmt) {
    const bool md = fmt == TableFormat::markdown;
    auto num = [&](double v) { return md ? format_significant(v, kTableDigits) : format_roundtrip(v); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(md ? "n/a" : ""); };
    auto cv = [&](const DistributionSummary& s) {
        return s.mean == 0.0 ? std::string(md ? "n/a" : "") : num(coefficient_of_variation(s));
    };

    std::string out;
    if (md) {
        const std::vector<std::string> head{"Variable", "n",      "Min.",     "Max.",     "Sum",
                                            "Mean (mu)", "StDev (sigma)", "Skewness", "Kurtosis", "sigma/mu"};
        out += detail::md_row(head) + detail::md_rule(head.size());
    } else {
        out += "name,label,n,min,max,sum,mean,stdev,skewness,kurtosis,cv\n";
    }
    for (const auto& r : rows) {
        const auto& s = r.summary;
        std::vector<std::string> cells;
        if (!md) cells.push_back(r.name);
        cells.insert(cells.end(), {r.label, std::to_string(s.n), num(s.min), num(s.max), num(s.sum), num(s.mean),
                                   num(s.stdev), opt(s.skewness), opt(s.kurtosis), cv(s)});
        out += md ? detail::md_row(cells) : detail::csv_row(cells);
    }
    return out;
}

/// Per-indicator mean, stdev and interval bounds.
inline std::string render_interval_table(const OutlierReport& report, TableFormat fmt) {
    const bool md = fmt == TableFormat::markdown;
    auto num = [&](double v) { return md ? format_significant(v, kTableDigits) : format_roundtrip(v); };
    const std::string k = detail::k_text(report.k);
    std::string out;
    if (md) {
        const std::vector<std::string> head{"Indicator", "Mean (mu)", "StDev (sigma)", "mu-" + k + "sigma",
                                            "mu+" + k + "sigma"};
        out += detail::md_row(head) + detail::md_rule(head.size());
    } else {
        out += "name,label,mean,stdev,k,lower,upper\n";
    }
    for (const auto& ind : report.indicators) {
        const auto& iv = ind.interval;
        if (md) {
            out += detail::md_row({ind.label, num(iv.mean), num(iv.stdev), num(iv.lower), num(iv.upper)});
        } else {
            out += detail::csv_row(
                {ind.name, ind.label, num(iv.mean), num(iv.stdev), format_roundtrip(iv.k), num(iv.lower), num(iv.upper)});
        }
    }
    if (md && !report.degenerate.empty()) {
        out += "\nSkipped (degenerate):";
        for (const auto& d : report.degenerate) out += " " + d.name + " (" + d.reason + ");";
        out += "\n";
    }
    return out;
}

/// Indicators as rows, flagged firms as columns. Outlier cells are printed
/// bare and inlier cells of those firms in parentheses.
inline std::string render_outlier_table(const OutlierReport& report, TableFormat fmt) {
    const bool md = fmt == TableFormat::markdown;
    std::vector<std::size_t> cols;
    for (std::size_t f = 0; f < report.firms.size(); ++f) {
        if (report.firms[f].is_flagged()) cols.push_back(f);
    }
    auto firm_header = [&](std::size_t f) {
        const auto& t = report.firms[f];
        return t.name.empty() ? t.firm_id : t.name;
    };

    std::string out;
    std::vector<std::string> head{md ? "Indicator" : "name"};
    for (auto f : cols) head.push_back(md ? firm_header(f) : report.firms[f].firm_id);
    out += md ? detail::md_row(head) + detail::md_rule(head.size()) : detail::csv_row(head);

    if (cols.empty()) {
        const std::string note = "no outliers at k=" + detail::k_text(report.k);
        out += md ? "\n" + note + "\n" : "# " + note + "\n";
        return out;
    }
    for (const auto& ind : report.indicators) {
        std::vector<std::string> cells{md ? ind.label : ind.name};
        for (auto f : cols) {
            const double v = ind.values[f];
            std::string text = md ? format_fixed(v, kOutlierDecimals) : format_roundtrip(v);
            if (ind.classes[f] == ClassKind::inlier) text = "(" + text + ")";
            cells.push_back(std::move(text));
        }
        out += md ? detail::md_row(cells) : detail::csv_row(cells);
    }
    if (md) {
        out += "\nBare values lie outside ]mu-" + detail::k_text(report.k) + "sigma, mu+" + detail::k_text(report.k) +
               "sigma[; values in parentheses are inside it.\n";
        if (!report.degenerate.empty()) {
            out += "Skipped (degenerate):";
            for (const auto& d : report.degenerate) out += " " + d.name + ";";
            out += "\n";
        }
    }
    return out;
}

/// Parses a cell of the CSV outlier table: "(x)" marks an inlier.
inline std::pair<double, bool> parse_outlier_cell(std::string_view cell) {
    bool inlier = false;
    if (cell.size() >= 2 && cell.front() == '(' && cell.back() == ')') {
        inlier = true;
        cell = cell.substr(1, cell.size() - 2);
    }
    auto v = parse_double(cell);
    if (!v) throw std::invalid_argument("bad outlier cell '" + std::string(cell) + "'");
    return {*v, inlier};
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

inline constexpr std::string_view kReportSchema = "outlier-report/1";

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

inline std::optional<double> json_opt(const ordered_json& j) {
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

inline ClassKind parse_class(const std::string& s) {
    if (s == "negative_outlier") return ClassKind::negative_outlier;
    if (s == "positive_outlier") return ClassKind::positive_outlier;
    if (s == "inlier") return ClassKind::inlier;
    throw std::invalid_argument("unknown classification '" + s + "'");
}

inline Direction parse_direction(const std::string& s) {
    if (s == "increase") return Direction::increase;
    if (s == "decrease") return Direction::decrease;
    if (s == "flat") return Direction::flat;
    throw std::invalid_argument("unknown direction '" + s + "'");
}

}  // namespace detail

struct ReportOptions {
    int systematic_threshold = 6;
    double near_miss_margin = 0.5;
};

inline ordered_json to_json(const OutlierReport& report, const ReportOptions& opts = {}) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["k"] = report.k;
    j["conventions"] = {{"stdev", to_string(report.conventions.stdev)},
                        {"moments", to_string(report.conventions.shape)},
                        {"kurtosis", to_string(report.conventions.kurtosis)}};
    j["systematic_threshold"] = opts.systematic_threshold;
    j["near_miss_margin"] = opts.near_miss_margin;

    ordered_json indicators = ordered_json::object();
    for (const auto& ind : report.indicators) {
        ordered_json e;
        e["label"] = ind.label;
        if (ind.summary) {
            const auto& s = *ind.summary;
            e["summary"] = {{"n", s.n},          {"min", s.min},
                            {"max", s.max},      {"sum", s.sum},
                            {"mean", s.mean},    {"stdev", s.stdev},
                            {"skewness", detail::opt_json(s.skewness)},
                            {"kurtosis", detail::opt_json(s.kurtosis)}};
        } else {
            e["summary"] = nullptr;
        }
        const auto& iv = ind.interval;
        e["interval"] = {{"mean", iv.mean}, {"stdev", iv.stdev}, {"k", iv.k}, {"lower", iv.lower}, {"upper", iv.upper}};
        ordered_json cls = ordered_json::object();
        ordered_json vals = ordered_json::object();
        for (std::size_t f = 0; f < report.firms.size(); ++f) {
            cls[report.firms[f].firm_id] = to_string(ind.classes[f]);
            vals[report.firms[f].firm_id] = ind.values[f];
        }
        e["classifications"] = std::move(cls);
        e["values"] = std::move(vals);
        indicators[ind.name] = std::move(e);
    }
    j["indicators"] = std::move(indicators);

    ordered_json degenerate = ordered_json::array();
    for (const auto& d : report.degenerate) degenerate.push_back({{"name", d.name}, {"reason", d.reason}});
    j["degenerate"] = std::move(degenerate);

    ordered_json firms = ordered_json::object();
    for (const auto& f : report.firms) {
        const auto pol = systematic_polarity(f, opts.systematic_threshold);
        firms[f.firm_id] = {{"name", f.name},
                            {"positive_count", f.positive_count},
                            {"negative_count", f.negative_count},
                            {"systematic", pol ? ordered_json(to_string(*pol)) : ordered_json(nullptr)},
                            {"direction", f.direction ? ordered_json(to_string(*f.direction)) : ordered_json(nullptr)}};
    }
    j["firms"] = std::move(firms);

    ordered_json nm = ordered_json::array();
    for (const auto& m : near_misses(report, opts.near_miss_margin)) {
        nm.push_back({{"firm_id", m.firm_id}, {"indicator", m.indicator}, {"value", m.value}, {"distance", m.distance}});
    }
    j["near_misses"] = std::move(nm);
    return j;
}

/// Rebuilds an OutlierReport from its JSON form.
inline OutlierReport report_from_json(const ordered_json& j) {
    if (j.at("schema").get<std::string>() != kReportSchema) {
        throw std::invalid_argument("unsupported report schema " + j.at("schema").dump());
    }
    OutlierReport r;
    r.k = j.at("k").get<double>();
    const auto& c = j.at("conventions");
    r.conventions.stdev = c.at("stdev") == "population" ? StdevMode::population : StdevMode::sample;
    r.conventions.shape = c.at("moments") == "population" ? ShapeMode::population : ShapeMode::adjusted;
    r.conventions.kurtosis = c.at("kurtosis") == "raw" ? KurtosisBasis::raw : KurtosisBasis::excess;

    for (const auto& [id, f] : j.at("firms").items()) {
        FirmTally t{id, f.at("name").get<std::string>(), f.at("positive_count").get<int>(),
                    f.at("negative_count").get<int>(), std::nullopt};
        if (!f.at("direction").is_null()) t.direction = detail::parse_direction(f.at("direction").get<std::string>());
        r.firms.push_back(std::move(t));
    }
    for (const auto& [name, e] : j.at("indicators").items()) {
        IndicatorResult ind;
        ind.name = name;
        ind.label = e.at("label").get<std::string>();
        if (!e.at("summary").is_null()) {
            const auto& s = e.at("summary");
            DistributionSummary d;
            d.n = s.at("n").get<std::size_t>();
            d.min = s.at("min").get<double>();
            d.max = s.at("max").get<double>();
            d.sum = s.at("sum").get<double>();
            d.mean = s.at("mean").get<double>();
            d.stdev = s.at("stdev").get<double>();
            d.skewness = detail::json_opt(s.at("skewness"));
            d.kurtosis = detail::json_opt(s.at("kurtosis"));
            d.conventions = r.conventions;
            ind.summary = d;
        }
        const auto& iv = e.at("interval");
        ind.interval = {iv.at("mean").get<double>(), iv.at("stdev").get<double>(), iv.at("k").get<double>(),
                        iv.at("lower").get<double>(), iv.at("upper").get<double>()};
        for (const auto& f : r.firms) {
            ind.values.push_back(e.at("values").at(f.firm_id).get<double>());
            ind.classes.push_back(detail::parse_class(e.at("classifications").at(f.firm_id).get<std::string>()));
        }
        r.indicators.push_back(std::move(ind));
    }
    for (const auto& d : j.at("degenerate")) {
        r.degenerate.push_back({d.at("name").get<std::string>(), d.at("reason").get<std::string>()});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Scatter data
// ---------------------------------------------------------------------------

struct ScatterPoint {
    std::string firm_id;
    double x;
    double y;
    std::string tag;
};

struct ScatterSeries {
    std::string name;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ScatterPoint> points;
};

/// Five series: last vs first pre-window TTA, and each post-window average
/// against the mean TTA. Every point is tagged with the firm's TTA direction.
inline std::vector<ScatterSeries> build_scatter_series(std::span<const CompanyRecord> records,
                                                       std::span<const EfficiencyMatrix> matrices,
                                                       const DatasetConfig& cfg = {}) {
    if (records.size() != matrices.size()) throw std::invalid_argument("records and matrices differ in length");
    const std::string first_year = cfg.pre_years.empty() ? "first" : cfg.pre_years.front();
    const std::string last_year = cfg.pre_years.empty() ? "last" : cfg.pre_years.back();

    std::vector<ScatterSeries> out;
    ScatterSeries tta{"tta" + last_year.substr(last_year.size() >= 2 ? last_year.size() - 2 : 0) + "_vs_tta" +
                          first_year.substr(first_year.size() >= 2 ? first_year.size() - 2 : 0),
                      "TTA " + last_year + " vs TTA " + first_year, "TTA " + first_year, "TTA " + last_year, {}};
    for (std::size_t i = 0; i < records.size(); ++i) {
        tta.points.push_back({records[i].firm_id, records[i].tta_pre.front(), records[i].tta_pre.back(),
                              to_string(matrices[i].profile.direction)});
    }
    out.push_back(std::move(tta));

    constexpr std::array<std::string_view, kIndicatorKindCount> labels{"<DS>_3", "<DA>_3", "<ROI>_3", "<ROS>_3"};
    for (auto kind : kIndicatorKinds) {
        ScatterSeries s{std::string(kind_name(kind)) + "_avg_vs_tta2",
                        std::string(labels[static_cast<std::size_t>(kind)]) + " vs <TTA>_2", "<TTA>_2",
                        std::string(labels[static_cast<std::size_t>(kind)]), {}};
        for (std::size_t i = 0; i < records.size(); ++i) {
            s.points.push_back({records[i].firm_id, matrices[i].profile.tta_mean, matrices[i].panel[kind],
                                to_string(matrices[i].profile.direction)});
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string render_scatter_csv(const ScatterSeries& s) {
    std::string out = "firm_id,x,y,tag\n";
    for (const auto& p : s.points) {
        out += csv::quote(p.firm_id) + "," + format_roundtrip(p.x) + "," + format_roundtrip(p.y) + "," + p.tag + "\n";
    }
    return out;
}

/// Pre-window TTA per firm in input order, for a stacked bar display.
inline std::string render_stacked_tta_csv(std::span<const CompanyRecord> records) {
    std::string out = "firm_id,index,tta_first,tta_last\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out += csv::quote(records[i].firm_id) + "," + std::to_string(i + 1) + "," +
               format_roundtrip(records[i].tta_pre.front()) + "," + format_roundtrip(records[i].tta_pre.back()) + "\n";
    }
    return out;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

inline std::string px(double v) { return format_fixed(v, 2); }

}  // namespace detail

/// Static SVG scatter plot: increases as open squares with a cross,
/// decreases as filled squares, flat as open circles.
inline std::string render_scatter_svg(const ScatterSeries& s) {
    constexpr double width = 640, height = 480, left = 80, right = 20, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    if (!s.points.empty()) {
        x_min = x_max = s.points.front().x;
        y_min = y_max = s.points.front().y;
        for (const auto& p : s.points) {
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_min = std::min(y_min, p.y);
            y_max = std::max(y_max, p.y);
        }
    }
    auto pad = [](double& lo, double& hi) {
        if (hi == lo) {
            const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
            lo -= d;
            hi += d;
        } else {
            const double d = (hi - lo) * 0.05;
            lo -= d;
            hi += d;
        }
    };
    pad(x_min, x_max);
    pad(y_min, y_max);
    auto map_x = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto map_y = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

    using detail::px;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" + px(height) +
           "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + px(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + detail::xml_escape(s.title) + "</text>\n";
    out += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" + px(plot_w) + "\" height=\"" + px(plot_h) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        out += "<text x=\"" + px(map_x(fx)) + "\" y=\"" + px(top + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_significant(fx, 3) + "</text>\n";
        out += "<text x=\"" + px(left - 6) + "\" y=\"" + px(map_y(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + format_significant(fy, 3) +
               "</text>\n";
    }
    out += "<text x=\"" + px(left + plot_w / 2) + "\" y=\"" + px(height - 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + detail::xml_escape(s.x_label) +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + px(top + plot_h / 2) + "\" transform=\"rotate(-90 18 " + px(top + plot_h / 2) +
           ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + detail::xml_escape(s.y_label) +
           "</text>\n";
    for (const auto& p : s.points) {
        const double cx = map_x(p.x);
        const double cy = map_y(p.y);
        const std::string title = "<title>" + detail::xml_escape(p.firm_id) + "</title>";
        if (p.tag == "increase") {
            out += "<g stroke=\"black\" fill=\"none\">" + title + "<rect x=\"" + px(cx - 4) + "\" y=\"" + px(cy - 4) +
                   "\" width=\"8\" height=\"8\"/><path d=\"M" + px(cx - 4) + " " + px(cy - 4) + "L" + px(cx + 4) +
                   " " + px(cy + 4) + "M" + px(cx - 4) + " " + px(cy + 4) + "L" + px(cx + 4) + " " + px(cy - 4) +
                   "\"/></g>\n";
        } else if (p.tag == "decrease") {
            out += "<rect x=\"" + px(cx - 4) + "\" y=\"" + px(cy - 4) + "\" width=\"8\" height=\"8\" fill=\"black\">" +
                   title + "</rect>\n";
        } else {
            out += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"4\" fill=\"none\" stroke=\"black\">" +
                   title + "</circle>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace outlier_perf
