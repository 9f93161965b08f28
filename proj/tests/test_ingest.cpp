#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "outlier_perf/fixtures.hpp"
#include "outlier_perf/ingest.hpp"
#include "support/test_util.hpp"

namespace {

using namespace outlier_perf;

const std::string kHeader =
    "firm_id,name,sector,tta_2006,tta_2007,ds_2008,ds_2009,ds_2010,da_2008,da_2009,da_2010,"
    "roi_2008,roi_2009,roi_2010,ros_2008,ros_2009,ros_2010\n";

DataErrorKind parse_error_kind(const std::string& text) {
    try {
        (void)parse_dataset_text(text);
    } catch (const DataError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a DataError";
    return DataErrorKind::io;
}

TEST(ParseDataset, SingleRowEchoesInput) {
    const auto recs = parse_dataset_text(kHeader + "A,Alpha,Media,100,200,0,0,0,0,0,0,0,0,0,0,0,0\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].firm_id, "A");
    EXPECT_EQ(recs[0].name, "Alpha");
    EXPECT_EQ(recs[0].sector, "Media");
    EXPECT_EQ(recs[0].tta_pre, (std::vector<double>{100, 200}));
    for (auto kind : kIndicatorKinds) EXPECT_EQ(recs[0].perf(kind), (std::vector<double>{0, 0, 0}));
}

TEST(ParseDataset, ZeroTtaIsRejected) {
    try {
        (void)parse_dataset_text(kHeader + "A,Alpha,Media,0,200,0,0,0,0,0,0,0,0,0,0,0,0\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(e.kind(), DataErrorKind::non_positive_tta);
        EXPECT_EQ(e.column(), "tta_2006");
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("'A'"), std::string::npos);
    }
    EXPECT_EQ(parse_error_kind(kHeader + "A,Alpha,Media,10,-3,0,0,0,0,0,0,0,0,0,0,0,0\n"), DataErrorKind::non_positive_tta);
}

TEST(ParseDataset, NegativePerformanceIsLegal) {
    const auto recs = parse_dataset_text(kHeader + "A,Alpha,Media,1,2,-0.19,0,0,0,0,0,0,0,0,-0.66,0,0\n");
    EXPECT_EQ(recs[0].perf(IndicatorKind::ds)[0], -0.19);
    EXPECT_EQ(recs[0].perf(IndicatorKind::ros)[0], -0.66);
}

TEST(ParseDataset, ErrorTaxonomy) {
    EXPECT_EQ(parse_error_kind(""), DataErrorKind::empty_dataset);
    EXPECT_EQ(parse_error_kind(kHeader), DataErrorKind::empty_dataset);
    EXPECT_EQ(parse_error_kind(kHeader + "A,Alpha,Media,1,2,x,0,0,0,0,0,0,0,0,0,0,0\n"), DataErrorKind::non_numeric_cell);
    EXPECT_EQ(parse_error_kind(kHeader + "A,Alpha,Media,1,2,,0,0,0,0,0,0,0,0,0,0,0\n"), DataErrorKind::non_numeric_cell);
    EXPECT_EQ(parse_error_kind(kHeader + "A,Alpha,Media,1,2,nan,0,0,0,0,0,0,0,0,0,0,0\n"), DataErrorKind::non_numeric_cell);
    EXPECT_EQ(parse_error_kind(kHeader + "A,Alpha,Media,1,2,0,0,0,0,0,0,0,0,0,0,0\n"), DataErrorKind::wrong_field_count);
    EXPECT_EQ(parse_error_kind(kHeader + "A,a,s,1,2,0,0,0,0,0,0,0,0,0,0,0,0\nA,b,s,1,2,0,0,0,0,0,0,0,0,0,0,0,0\n"),
              DataErrorKind::duplicate_firm_id);
}

TEST(ParseDataset, MissingColumnNamesTheColumn) {
    std::string header = kHeader;
    header.replace(header.find("roi_2009"), 8, "roi_2099");
    try {
        (void)parse_dataset_text(header + "A,Alpha,Media,1,2,0,0,0,0,0,0,0,0,0,0,0,0\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(e.kind(), DataErrorKind::missing_column);
        EXPECT_EQ(e.column(), "roi_2009");
    }
}

TEST(ParseDataset, NonNumericCellReportsLineAndColumn) {
    try {
        (void)parse_dataset_text(kHeader + "A,a,s,1,2,0,0,0,0,0,0,0,0,0,0,0,0\nB,b,s,1,2,0,0,0,0,0,0,0,oops,0,0,0,0\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), "roi_2009");
    }
}

TEST(ParseDataset, QuotedFieldsAndCrlf) {
    const auto recs =
        parse_dataset_text(kHeader + "A,\"Cairo, \"\"the\"\" firm\",Media,1,2,0,0,0,0,0,0,0,0,0,0,0,0\r\n\r\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].name, "Cairo, \"the\" firm");
    EXPECT_EQ(recs[0].perf(IndicatorKind::ros).back(), 0.0);
}

TEST(ParseDataset, ColumnsMatchedByName) {
    const std::string text =
        "name,firm_id,sector,tta_2007,tta_2006,ds_2008,ds_2009,ds_2010,da_2008,da_2009,da_2010,"
        "roi_2008,roi_2009,roi_2010,ros_2008,ros_2009,ros_2010\n"
        "Alpha,A,Media,200,100,1,2,3,4,5,6,7,8,9,10,11,12\n";
    const auto recs = parse_dataset_text(text);
    EXPECT_EQ(recs[0].firm_id, "A");
    EXPECT_EQ(recs[0].tta_pre, (std::vector<double>{100, 200}));
}

TEST(ParseDataset, CustomWindows) {
    DatasetConfig cfg{{"2005", "2006", "2007"}, {"2008", "2009"}};
    const std::string text =
        "firm_id,name,sector,tta_2005,tta_2006,tta_2007,ds_2008,ds_2009,da_2008,da_2009,roi_2008,roi_2009,ros_2008,"
        "ros_2009\nA,a,s,1,2,3,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n";
    const auto recs = parse_dataset_text(text, cfg);
    EXPECT_EQ(recs[0].tta_pre.size(), 3u);
    EXPECT_EQ(recs[0].perf(IndicatorKind::ros), (std::vector<double>{0.7, 0.8}));
    EXPECT_TRUE(validate_dataset(recs, cfg).empty());
}

TEST(ParseDataset, FileRoundTripPreservesOrderAndValues) {
    test_util::TempDir dir("ingest");
    fixtures::FixtureSpec spec;
    spec.firms = 62;
    spec.seed = 11;
    const auto records = fixtures::generate(spec);
    write_dataset_file(dir / "panel.csv", records);
    const auto back = parse_dataset(dir / "panel.csv");
    ASSERT_EQ(back.size(), 62u);
    EXPECT_EQ(back, records);
}

TEST(ParseDataset, MissingFileIsIoError) {
    try {
        (void)parse_dataset("/nonexistent/definitely/not/here.csv");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(e.kind(), DataErrorKind::io);
    }
}

TEST(ValidateDataset, EmptyAndDuplicate) {
    auto r = validate_dataset({});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].kind, DataErrorKind::empty_dataset);

    CompanyRecord a{"A", "a", "s", {1, 2}, {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}};
    r = validate_dataset({a, a});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].kind, DataErrorKind::duplicate_firm_id);
    EXPECT_EQ(r[0].firm_id, "A");
}

TEST(ValidateDataset, ReportsEveryInvariantViolation) {
    CompanyRecord bad{"B", "b", "s", {0, 2, 3}, {{{0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}};
    const auto r = validate_dataset({bad});
    auto has = [&](DataErrorKind k) {
        return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.kind == k; });
    };
    EXPECT_TRUE(has(DataErrorKind::wrong_window_length));
    EXPECT_TRUE(has(DataErrorKind::non_positive_tta));
}

TEST(ValidateDataset, AgreesWithParserOnRandomFixtures) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        fixtures::FixtureSpec spec;
        spec.seed = seed;
        spec.firms = 1 + seed % 70;
        const auto text = write_dataset(fixtures::generate(spec));
        const auto parsed = parse_dataset_text(text);
        EXPECT_TRUE(validate_dataset(parsed).empty()) << "seed " << seed;
        EXPECT_EQ(write_dataset(parsed), text);
    }
}

}  // namespace
