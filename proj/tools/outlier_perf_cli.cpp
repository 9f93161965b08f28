// Command-line front end: analyze, validate, fixtures.
//
// Exit codes: 0 ok, 1 data error, 2 usage error.
// OUTLIER_PERF_LOG sets diagnostic verbosity using spdlog level syntax
// (e.g. "debug", "info", "off"); the default is "warn".

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "outlier_perf/outlier_perf.hpp"

namespace {

namespace op = outlier_perf;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("outlier_perf");
    logger->set_pattern("%^[%l]%$ %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("OUTLIER_PERF_LOG"); env && *env) spdlog::cfg::helpers::load_levels(env);
}

op::OutputFormat parse_format(const std::string& s) {
    if (s == "markdown" || s == "md") return op::OutputFormat::markdown;
    if (s == "csv") return op::OutputFormat::csv;
    if (s == "json") return op::OutputFormat::json;
    throw op::ConfigError("unknown format '" + s + "' (expected markdown, csv or json)");
}

int run_analyze(const op::RunConfig& cfg) {
    spdlog::info("analyzing {} (k={}, threshold={})", cfg.input.string(), cfg.k, cfg.systematic_threshold);
    const auto res = op::run_pipeline(cfg);
    for (const auto& d : res.report.degenerate) {
        spdlog::warn("indicator {} skipped: {}", d.name, d.reason);
    }
    for (const auto& s : op::systematic_outliers(res.report, cfg.systematic_threshold)) {
        spdlog::info("systematic {} outlier: {} (+{} / -{})", op::to_string(s.polarity), s.firm_id, s.positive_count,
                     s.negative_count);
    }
    for (const auto& [name, content] : res.outputs) spdlog::debug("wrote {} ({} bytes)", name, content.size());
    std::cout << "analyzed " << res.records.size() << " firms; " << res.outputs.size() << " files written to "
              << cfg.output_dir.string() << "\n";
    return kExitOk;
}

int run_validate(const std::string& input) {
    const auto records = op::parse_dataset(input);
    const auto violations = op::validate_dataset(records);
    if (violations.empty()) {
        std::cout << input << ": " << records.size() << " firms, no violations\n";
        return kExitOk;
    }
    for (const auto& v : violations) {
        std::cout << op::to_string(v.kind) << (v.firm_id.empty() ? "" : " [" + v.firm_id + "]") << ": " << v.detail
                  << "\n";
    }
    return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Outlier screening of firm performance-efficiency ratios"};
    app.require_subcommand(1);

    op::RunConfig cfg;
    std::string input;
    std::string stdev_mode = "sample";
    std::string moments_mode = "adjusted";
    std::string kurtosis_basis = "excess";
    std::vector<std::string> formats{"markdown", "csv", "json"};
    std::string out_dir = "out";

    auto* analyze = app.add_subcommand("analyze", "Run the full screening and write tables, report and figure data");
    analyze->add_option("--input", input, "Firm panel CSV")->required();
    analyze->add_option("--k", cfg.k, "Interval half-width in standard deviations")->capture_default_str();
    analyze->add_option("--stdev", stdev_mode, "Standard deviation divisor")
        ->check(CLI::IsMember({"sample", "population"}))
        ->capture_default_str();
    analyze->add_option("--moments", moments_mode, "Skewness/kurtosis estimator")
        ->check(CLI::IsMember({"adjusted", "population"}))
        ->capture_default_str();
    analyze->add_option("--kurtosis", kurtosis_basis, "Kurtosis basis")
        ->check(CLI::IsMember({"excess", "raw"}))
        ->capture_default_str();
    analyze->add_option("--systematic-threshold", cfg.systematic_threshold, "Outlier cells needed to be systematic")
        ->capture_default_str();
    analyze->add_option("--near-miss-margin", cfg.near_miss_margin, "Fraction of k*sigma counted as a near miss")
        ->capture_default_str();
    analyze->add_option("--format", formats, "Comma-separated subset of markdown,csv,json")
        ->delimiter(',')
        ->capture_default_str();
    analyze->add_flag("--scatter", cfg.scatter, "Write scatter-plot data files");
    analyze->add_flag("--svg", cfg.scatter_svg, "Also render the scatter plots as SVG");
    analyze->add_flag("--stacked-tta", cfg.stacked_tta, "Write per-firm pre-window TTA for a stacked bar chart");
    analyze->add_option("--out", out_dir, "Output directory")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Check a firm panel CSV against the schema and invariants");
    validate->add_option("--input", input, "Firm panel CSV")->required();

    op::fixtures::FixtureSpec spec;
    int increase = -1, decrease = -1, flat = 0;
    std::string fixture_out;
    auto* fixtures = app.add_subcommand("fixtures", "Write a deterministic synthetic firm panel");
    fixtures->add_option("--firms", spec.firms, "Number of firms")->capture_default_str();
    fixtures->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    fixtures->add_option("--increase", increase, "Firms whose TTA increases (requires --decrease)");
    fixtures->add_option("--decrease", decrease, "Firms whose TTA decreases (requires --increase)");
    fixtures->add_option("--flat", flat, "Firms with unchanged TTA")->capture_default_str();
    fixtures->add_option("--out", fixture_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze) {
            cfg.input = input;
            cfg.output_dir = out_dir;
            cfg.conventions.stdev = stdev_mode == "population" ? op::StdevMode::population : op::StdevMode::sample;
            cfg.conventions.shape = moments_mode == "population" ? op::ShapeMode::population : op::ShapeMode::adjusted;
            cfg.conventions.kurtosis = kurtosis_basis == "raw" ? op::KurtosisBasis::raw : op::KurtosisBasis::excess;
            cfg.formats.clear();
            for (const auto& f : formats) cfg.formats.insert(parse_format(f));
            cfg.validate();
            return run_analyze(cfg);
        }
        if (*validate) return run_validate(input);
        if (*fixtures) {
            if ((increase >= 0) != (decrease >= 0)) throw op::ConfigError("--increase and --decrease go together");
            if (increase >= 0) spec.directions = op::fixtures::DirectionCounts{increase, decrease, flat};
            op::write_dataset_file(fixture_out, op::fixtures::generate(spec));
            std::cout << "wrote " << spec.firms << " firms to " << fixture_out << "\n";
            return kExitOk;
        }
    } catch (const op::ConfigError& e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    } catch (const op::InfeasibleConstraints& e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    } catch (const op::DataError& e) {
        spdlog::error("{}", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitData;
    }
    return kExitUsage;
}
