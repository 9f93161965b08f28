#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "outlier_perf/fixtures.hpp"
#include "outlier_perf/pipeline.hpp"
#include "outlier_perf/report.hpp"
#include "support/test_util.hpp"

namespace {

using namespace outlier_perf;

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        out.push_back(csv::split_line(line));
    }
    return out;
}

OutlierReport fixture_report(std::uint64_t seed, std::size_t firms = 62) {
    fixtures::FixtureSpec spec;
    spec.seed = seed;
    spec.firms = firms;
    return detect_outliers(cross_sections(efficiency_matrices(fixtures::generate(spec))));
}

TEST(OutlierTable, NoFlaggedFirmsPrintsHeaderAndNote) {
    OutlierReport r;
    r.k = 2;
    r.firms.push_back({"A", "Alpha", 0, 0, std::nullopt});
    const auto md = render_outlier_table(r, TableFormat::markdown);
    EXPECT_EQ(md.rfind("| Indicator |", 0), 0u);
    EXPECT_NE(md.find("no outliers at k=2"), std::string::npos);
    EXPECT_EQ(md.find("Alpha"), std::string::npos);
    const auto csv = render_outlier_table(r, TableFormat::csv);
    EXPECT_EQ(csv, "name\n# no outliers at k=2\n");
}

TEST(OutlierTable, PublishedBuongiornoColumn) {
    const auto md = render_outlier_table(fixtures::table4_report(), TableFormat::markdown);
    std::istringstream in(md);
    std::string header, rule, first, second;
    std::getline(in, header);
    std::getline(in, rule);
    std::getline(in, first);
    std::getline(in, second);
    EXPECT_NE(header.find("Buongiorno"), std::string::npos);
    EXPECT_NE(header.find("Mondo TV"), std::string::npos);
    // Sales variation over minimum TTA: a bare outlier.
    EXPECT_NE(first.find("| 0.4795 |"), std::string::npos);
    // Asset variation over minimum TTA: an inlier, parenthesized.
    EXPECT_NE(second.find("| (-0.1155) |"), std::string::npos);
}

TEST(OutlierTable, CsvParsesBackToFullPrecision) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = fixture_report(seed);
        const auto rows = csv_rows(render_outlier_table(r, TableFormat::csv));
        ASSERT_FALSE(rows.empty());
        const auto& head = rows.front();
        for (std::size_t row = 1; row < rows.size(); ++row) {
            const auto* ind = r.find(rows[row][0]);
            ASSERT_NE(ind, nullptr);
            for (std::size_t col = 1; col < head.size(); ++col) {
                const auto f = *r.firm_index(head[col]);
                const auto [v, inlier] = parse_outlier_cell(rows[row][col]);
                EXPECT_EQ(v, ind->values[f]);
                EXPECT_EQ(inlier, ind->classes[f] == ClassKind::inlier);
            }
        }
        std::size_t flagged = 0;
        for (const auto& f : r.firms) flagged += f.is_flagged();
        EXPECT_EQ(head.size(), flagged + 1);
    }
}

TEST(OutlierTable, ParseCellErrors) {
    EXPECT_EQ(parse_outlier_cell("(0.5)"), (std::pair<double, bool>{0.5, true}));
    EXPECT_EQ(parse_outlier_cell("-1e-3"), (std::pair<double, bool>{-1e-3, false}));
    EXPECT_THROW((void)parse_outlier_cell("(x)"), std::invalid_argument);
}

TEST(IntervalTable, CsvRowsAreSelfConsistent) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = fixture_report(seed);
        const auto rows = csv_rows(render_interval_table(r, TableFormat::csv));
        ASSERT_EQ(rows.front(), (std::vector<std::string>{"name", "label", "mean", "stdev", "k", "lower", "upper"}));
        ASSERT_EQ(rows.size(), r.indicators.size() + 1);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double mean = *parse_double(rows[i][2]);
            const double sd = *parse_double(rows[i][3]);
            const double k = *parse_double(rows[i][4]);
            EXPECT_EQ(*parse_double(rows[i][5]), mean - k * sd);
            EXPECT_EQ(*parse_double(rows[i][6]), mean + k * sd);
        }
    }
}

TEST(IntervalTable, MarkdownListsDegenerateIndicators) {
    CrossSections cs;
    cs.firm_ids = {"A", "B"};
    cs.directions = {Direction::flat, Direction::flat};
    for (std::size_t i = 0; i < kRatioCount; ++i) cs.ratios[i] = {std::string(kRatioNames[i]), {1.0, 1.0}};
    const auto md = render_interval_table(detect_outliers(cs), TableFormat::markdown);
    EXPECT_NE(md.find("Skipped (degenerate): ds_over_ttam"), std::string::npos);
}

TEST(SummaryTable, UndefinedMomentsAndColumns) {
    const std::vector<double> x{1, 2};
    const std::vector<SummaryRow> rows{{"x", "X", summarize(x)}};
    const auto md = render_summary_table(rows, TableFormat::markdown);
    EXPECT_NE(md.find("sigma/mu"), std::string::npos);
    EXPECT_NE(md.find("| X | 2 | 1 | 2 | 3 | 1.5 | 0.70711 | n/a | n/a | 0.4714 |"), std::string::npos);
    const auto csv = csv_rows(render_summary_table(rows, TableFormat::csv));
    ASSERT_EQ(csv.size(), 2u);
    EXPECT_EQ(csv[1][8], "");
    EXPECT_EQ(*parse_double(csv[1][7]), std::sqrt(0.5));
}

TEST(JsonReport, RoundTripsThroughText) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = fixture_report(seed, 20 + seed);
        const auto text = to_json(r).dump(2);
        const auto back = report_from_json(ordered_json::parse(text));
        EXPECT_EQ(back.k, r.k);
        ASSERT_EQ(back.firms.size(), r.firms.size());
        for (std::size_t f = 0; f < r.firms.size(); ++f) {
            EXPECT_EQ(back.firms[f].firm_id, r.firms[f].firm_id);
            EXPECT_EQ(back.firms[f].positive_count, r.firms[f].positive_count);
            EXPECT_EQ(back.firms[f].negative_count, r.firms[f].negative_count);
            EXPECT_EQ(back.firms[f].direction, r.firms[f].direction);
        }
        ASSERT_EQ(back.indicators.size(), r.indicators.size());
        for (std::size_t i = 0; i < r.indicators.size(); ++i) {
            EXPECT_EQ(back.indicators[i].values, r.indicators[i].values);
            EXPECT_EQ(back.indicators[i].classes, r.indicators[i].classes);
            EXPECT_EQ(back.indicators[i].interval.lower, r.indicators[i].interval.lower);
            EXPECT_EQ(back.indicators[i].interval.upper, r.indicators[i].interval.upper);
            ASSERT_TRUE(back.indicators[i].summary);
            EXPECT_EQ(back.indicators[i].summary->stdev, r.indicators[i].summary->stdev);
        }
        EXPECT_EQ(to_json(back).dump(2), text);
    }
}

TEST(JsonReport, CarriesSystematicAndNearMissLists) {
    const auto j = to_json(fixtures::table4_report(), {4, 0.75});
    EXPECT_EQ(j.at("schema"), "outlier-report/1");
    EXPECT_EQ(j.at("firms").at("45").at("systematic"), "negative");
    EXPECT_EQ(j.at("firms").at("11").at("systematic"), "positive");
    EXPECT_TRUE(j.at("indicators").at("ds_over_ttam").at("summary").is_null());
    EXPECT_FALSE(j.at("near_misses").empty());
    EXPECT_THROW((void)report_from_json(ordered_json{{"schema", "other"}}), std::invalid_argument);
}

TEST(Scatter, SingleFirmGivesOneRowPerSeries) {
    const std::vector<CompanyRecord> recs{
        {"A", "a", "s", {10, 20}, {{{0.1, 0.2, 0.3}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}}};
    const auto mats = efficiency_matrices(recs);
    const auto series = build_scatter_series(recs, mats);
    ASSERT_EQ(series.size(), 5u);
    EXPECT_EQ(series[0].name, "tta07_vs_tta06");
    for (const auto& s : series) {
        EXPECT_EQ(s.points.size(), 1u);
        const auto rows = csv_rows(render_scatter_csv(s));
        EXPECT_EQ(rows.size(), 2u);
    }
    EXPECT_EQ(series[0].points[0].x, 10);
    EXPECT_EQ(series[0].points[0].y, 20);
    EXPECT_EQ(series[1].points[0].x, 15);
}

TEST(Scatter, ConstrainedFixtureTagsAndCoordinates) {
    fixtures::FixtureSpec spec;
    spec.directions = fixtures::DirectionCounts{45, 17, 0};
    const auto recs = fixtures::generate(spec);
    const auto mats = efficiency_matrices(recs);
    for (const auto& s : build_scatter_series(recs, mats)) {
        std::size_t inc = 0;
        std::set<std::string> ids;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            inc += s.points[i].tag == "increase";
            ids.insert(s.points[i].firm_id);
            if (s.name != "tta07_vs_tta06") {
                const auto& tta = recs[i].tta_pre;
                EXPECT_DOUBLE_EQ(s.points[i].x, (tta[0] + tta[1]) / 2);
            }
        }
        EXPECT_EQ(inc, 45u);
        EXPECT_EQ(ids.size(), recs.size());
    }
}

TEST(Scatter, SvgAndStackedExport) {
    fixtures::FixtureSpec spec;
    spec.firms = 8;
    const auto recs = fixtures::generate(spec);
    const auto series = build_scatter_series(recs, efficiency_matrices(recs));
    const auto svg = render_scatter_svg(series[1]);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    std::size_t markers = 0;
    for (auto p = svg.find("<title>"); p != std::string::npos; p = svg.find("<title>", p + 1)) ++markers;
    EXPECT_EQ(markers, 8u);
    const auto stacked = csv_rows(render_stacked_tta_csv(recs));
    ASSERT_EQ(stacked.size(), 9u);
    EXPECT_EQ(stacked[3][1], "3");
    EXPECT_EQ(*parse_double(stacked[3][2]), recs[2].tta_pre[0]);
}

TEST(Pipeline, WritesExpectedFilesAtomically) {
    test_util::TempDir dir("pipeline");
    fixtures::FixtureSpec spec;
    write_dataset_file(dir / "in.csv", fixtures::generate(spec));
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.output_dir = dir / "out";
    cfg.scatter = true;
    const auto res = run_pipeline(cfg);
    const auto tree = test_util::read_tree(dir / "out");
    EXPECT_EQ(tree.size(), 8u + 1u + 5u);
    for (const auto& [name, content] : res.outputs) EXPECT_EQ(tree.at(name), content);
    for (const auto& [name, content] : tree) EXPECT_EQ(name.find(".partial"), std::string::npos);
    const auto j = ordered_json::parse(tree.at("report.json"));
    EXPECT_EQ(j.at("cohorts").at("increase").get<int>() + j.at("cohorts").at("decrease").get<int>() +
                  j.at("cohorts").at("flat").get<int>(),
              62);
}

TEST(Pipeline, ConfigValidation) {
    RunConfig cfg;
    cfg.input = "x.csv";
    cfg.k = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.k = 2;
    cfg.systematic_threshold = 13;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.systematic_threshold = 6;
    cfg.near_miss_margin = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.near_miss_margin = 0.5;
    cfg.formats.clear();
    EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
