#include "report_json.hpp"

#include <stdexcept>
#include <string>

namespace robust::cli {

using nlohmann::json;

namespace {

void expect_type(const json& doc, std::string_view type)
{
    if (!doc.is_object() || doc.value("schema_version", -1) != kSchemaVersion ||
        doc.value("type", std::string{}) != type) {
        throw std::invalid_argument("not a version " + std::to_string(kSchemaVersion) + " '" + std::string(type) +
                                    "' document");
    }
}

json cell_json(const CellResult& cell)
{
    return {{"n", cell.n},
            {"mu", cell.mu},
            {"reps", cell.reps},
            {"reject_count_robust", cell.reject_robust},
            {"reject_count_classical", cell.reject_classical},
            {"rate_robust", cell.rate_robust()},
            {"rate_classical", cell.rate_classical()},
            {"std_err_robust", cell.se_robust()},
            {"std_err_classical", cell.se_classical()},
            {"sd_above_upper_count", cell.sd_above_upper},
            {"robust_only_count", cell.robust_only}};
}

}  // namespace

json to_json(const TestReport& report)
{
    json band = {{"sigma_lower", report.band_used.lower()},
                 {"sigma_upper", report.band_used.upper()},
                 {"source", report.band_source == BandSource::Known ? "known" : "estimated"},
                 {"degenerate", report.degenerate_band},
                 {"block_length", nullptr}};
    if (report.block_length) {
        band["block_length"] = *report.block_length;
    }
    return {{"schema_version", kSchemaVersion},
            {"type", "test_report"},
            {"kind", std::string(to_string(report.spec.kind()))},
            {"mu0", report.spec.mu0()},
            {"alpha", report.spec.alpha()},
            {"band", band},
            {"n", report.n},
            {"mean", report.mean},
            {"sample_sd", report.sample_sd},
            {"statistic", report.statistic},
            {"threshold_robust", report.threshold_robust},
            {"threshold_classical", report.threshold_classical},
            {"reject_robust", report.reject_robust},
            {"reject_classical", report.reject_classical},
            {"robust_p_value", report.robust_p_value},
            {"robust_p_value_note", "extension: maximal false-rejection probability at the observed statistic"}};
}

TestReport test_report_from_json(const json& doc)
{
    expect_type(doc, "test_report");
    const json& band = doc.at("band");
    TestReport report{
        .spec = TestSpec(parse_test_kind(doc.at("kind").get<std::string>()), doc.at("mu0").get<double>(),
                         doc.at("alpha").get<double>()),
        .band_used = VarianceBand(band.at("sigma_lower").get<double>(), band.at("sigma_upper").get<double>())};
    report.band_source = band.at("source").get<std::string>() == "known" ? BandSource::Known : BandSource::Estimated;
    report.degenerate_band = band.at("degenerate").get<bool>();
    if (!band.at("block_length").is_null()) {
        report.block_length = band.at("block_length").get<std::size_t>();
    }
    report.n = doc.at("n").get<std::size_t>();
    report.mean = doc.at("mean").get<double>();
    report.sample_sd = doc.at("sample_sd").get<double>();
    report.statistic = doc.at("statistic").get<double>();
    report.threshold_robust = doc.at("threshold_robust").get<double>();
    report.threshold_classical = doc.at("threshold_classical").get<double>();
    report.reject_robust = doc.at("reject_robust").get<bool>();
    report.reject_classical = doc.at("reject_classical").get<bool>();
    report.robust_p_value = doc.at("robust_p_value").get<double>();
    return report;
}

json to_json(const BandEstimate& estimate, std::size_t n)
{
    return {{"schema_version", kSchemaVersion},
            {"type", "band_estimate"},
            {"method", std::string(to_string(estimate.method))},
            {"n", n},
            {"block_length", estimate.block_length},
            {"block_count", estimate.block_count},
            {"sigma_lower_sq_hat", estimate.lower_var},
            {"sigma_upper_sq_hat", estimate.upper_var}};
}

BandEstimate band_estimate_from_json(const json& doc)
{
    expect_type(doc, "band_estimate");
    const auto method = doc.at("method").get<std::string>();
    if (method != "subsample" && method != "moving-block") {
        throw std::invalid_argument("unknown band estimation method '" + method + "'");
    }
    return {doc.at("sigma_lower_sq_hat").get<double>(), doc.at("sigma_upper_sq_hat").get<double>(),
            method == "subsample" ? BandMethod::Subsample : BandMethod::MovingBlock,
            doc.at("block_count").get<std::size_t>(), doc.at("block_length").get<std::size_t>()};
}

json to_json(const SimulationConfig& cfg, const SimulationReport& report)
{
    json cells = json::array();
    for (const CellResult& cell : report.cells) {
        cells.push_back(cell_json(cell));
    }
    return {{"schema_version", kSchemaVersion},
            {"type", "simulation_report"},
            {"scenario", std::string(to_string(cfg.scenario))},
            {"sigma_lower", cfg.band.lower()},
            {"sigma_upper", cfg.band.upper()},
            {"mu0", cfg.mu0},
            {"alpha", cfg.alpha},
            {"reps", cfg.reps},
            {"seed", cfg.seed},
            {"adversary_c", adversary_threshold(cfg)},
            {"noise", std::string(to_string(cfg.noise))},
            {"cells", cells}};
}

}  // namespace robust::cli
