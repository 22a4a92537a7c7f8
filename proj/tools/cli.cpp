#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string_view>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "report_json.hpp"
#include "robust/bounds.hpp"
#include "robust/errors.hpp"
#include "robust/mc.hpp"
#include "robust/oracle.hpp"
#include "robust/rules.hpp"

namespace robust::cli {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct CriticalValueArgs {
    std::string kind;
    double alpha = 0.0;
    double sigma_lower = 0.0;
    double sigma_upper = 0.0;
};

struct TestArgs {
    std::string kind;
    double mu0 = 0.0;
    double alpha = 0.0;
    std::string data;
    bool header = false;
    std::optional<double> sigma_lower;
    std::optional<double> sigma_upper;
    std::optional<std::size_t> block_length;
    bool estimate_band = false;
};

struct BoundsArgs {
    std::string data;
    bool header = false;
    std::optional<std::size_t> block_length;
    std::optional<std::size_t> subsamples;
};

struct SimulateArgs {
    std::string scenario;
    std::size_t reps = 5000;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool power = false;
    std::size_t workers = 0;
    std::optional<double> sigma_lower;
    std::optional<double> sigma_upper;
    std::optional<double> mu0;
    std::optional<double> alpha;
    std::vector<std::size_t> n_list;
    std::vector<double> mu_grid;
    std::vector<std::size_t> power_n_grid;
    std::optional<std::size_t> power_n;
    std::optional<double> power_mu;
    std::optional<std::string> target;
    std::optional<double> adversary_c;
    std::string noise = "normal";
};

struct DpArgs {
    std::size_t n = 0;
    double c = 0.0;
    double sigma_lower = 0.0;
    double sigma_upper = 0.0;
    std::string kind = "I";
};

struct PdeArgs {
    double c = 0.0;
    double sigma_lower = 0.0;
    double sigma_upper = 0.0;
    double dx = 0.01;
    double t0 = 0.01;
    double courant = 0.5;
};

std::ofstream open_output(const fs::path& path)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw DataFileError("cannot write " + path.string());
    }
    return file;
}

int cmd_critical_value(const CriticalValueArgs& a, std::ostream& out)
{
    const TestSpec spec(parse_test_kind(a.kind), 0.0, a.alpha);
    const VarianceBand band(a.sigma_lower, a.sigma_upper);
    fmt::print(out, "{:.12g}\n", critical_value(spec, band));
    return kExitOk;
}

int cmd_test(const TestArgs& a, std::ostream& out)
{
    const bool known = a.sigma_lower.has_value() || a.sigma_upper.has_value();
    const bool estimated = a.block_length.has_value() || a.estimate_band;
    if (known == estimated) {
        throw DomainError("give either --sigma-lower/--sigma-upper or --block-length/--estimate-band");
    }
    if (known && !(a.sigma_lower && a.sigma_upper)) {
        throw DomainError("--sigma-lower and --sigma-upper must be given together");
    }
    if (a.block_length && a.estimate_band) {
        throw DomainError("--block-length and --estimate-band are mutually exclusive");
    }
    const TestSpec spec(parse_test_kind(a.kind), a.mu0, a.alpha);
    const Eigen::VectorXd data = read_data_file(a.data, a.header);

    TestReport report = known ? decide(data, spec, VarianceBand(*a.sigma_lower, *a.sigma_upper))
                              : estimate_then_test(data,
                                                   a.block_length ? std::optional<BlockConfig>(BlockConfig{*a.block_length})
                                                                  : std::nullopt,
                                                   spec);
    out << to_json(report).dump(2) << '\n';
    return kExitOk;
}

int cmd_estimate_bounds(const BoundsArgs& a, std::ostream& out)
{
    if (a.block_length && a.subsamples) {
        throw DomainError("--block-length and --subsamples are mutually exclusive");
    }
    const Eigen::VectorXd data = read_data_file(a.data, a.header);
    const auto n = static_cast<std::size_t>(data.size());
    const BandEstimate estimate =
        a.subsamples ? subsample_bounds(data, *a.subsamples)
                     : moving_block_bounds(data, a.block_length ? BlockConfig{*a.block_length} : BlockConfig::default_for(n));
    out << to_json(estimate, n).dump(2) << '\n';
    return kExitOk;
}

SimulationConfig simulation_config(const SimulateArgs& a)
{
    if (!a.seed) {
        throw DomainError("--seed is required");
    }
    const Scenario scenario = parse_scenario(a.scenario);
    SimulationConfig cfg = SimulationConfig::preset(scenario, *a.seed);
    if (scenario == Scenario::Custom) {
        if (!a.sigma_lower || !a.sigma_upper || !a.mu0 || !a.alpha || a.n_list.empty()) {
            throw DomainError(
                "scenario custom requires --sigma-lower, --sigma-upper, --mu0, --alpha and --n-list");
        }
        if (a.target.has_value() == a.adversary_c.has_value()) {
            throw DomainError("scenario custom requires exactly one of --target or --adversary-c");
        }
        cfg.band = VarianceBand(*a.sigma_lower, *a.sigma_upper);
        cfg.mu0 = *a.mu0;
        cfg.alpha = *a.alpha;
        if (a.adversary_c) {
            cfg.target = AdversaryTarget::Custom;
            cfg.custom_c = *a.adversary_c;
        } else if (*a.target == "classical") {
            cfg.target = AdversaryTarget::Classical;
        } else if (*a.target == "robust") {
            cfg.target = AdversaryTarget::Robust;
        } else {
            throw DomainError("--target must be classical or robust");
        }
        if (a.mu_grid.empty()) {
            for (double& mu : cfg.mu_list) {
                mu += cfg.mu0;
            }
        }
    } else if (a.sigma_lower || a.sigma_upper || a.mu0 || a.alpha || a.target || a.adversary_c) {
        throw DomainError("band, level, mean and adversary are fixed by scenario " + a.scenario);
    }
    cfg.noise = parse_noise_model(a.noise);
    cfg.reps = a.reps;
    cfg.workers = a.workers;
    if (!a.n_list.empty()) cfg.n_list = a.n_list;
    if (!a.mu_grid.empty()) cfg.mu_list = a.mu_grid;
    if (!a.power_n_grid.empty()) cfg.power_n_grid = a.power_n_grid;
    if (a.power_n) cfg.power_n = *a.power_n;
    if (a.power_mu) cfg.power_mu = *a.power_mu;
    cfg.validate();
    return cfg;
}

void write_power_csv(const fs::path& path, std::string_view axis_name, const std::vector<PowerPoint>& points)
{
    std::ofstream file = open_output(path);
    fmt::print(file, "{},robust,classical,approx\n", axis_name);
    for (const PowerPoint& p : points) {
        fmt::print(file, "{},{},{},{}\n", p.grid_value, p.cell.rate_robust(), p.cell.rate_classical(), p.approx);
    }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
    const SimulationConfig cfg = simulation_config(a);
    const fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DataFileError("cannot create output directory " + dir.string());
    }

    const SimulationReport report = run_table(cfg);
    {
        std::ofstream file = open_output(dir / "type1.csv");
        file << "n,robust_rate,classical_rate,robust_se,classical_se\n";
        for (const CellResult& cell : report.cells) {
            fmt::print(file, "{},{},{},{},{}\n", cell.n, cell.rate_robust(), cell.rate_classical(), cell.se_robust(),
                       cell.se_classical());
        }
    }
    {
        std::ofstream file = open_output(dir / "report.json");
        file << to_json(cfg, report).dump(2) << '\n';
    }

    fmt::print(out, "scenario {}  adversary c = {:.6f}  reps = {}\n", to_string(cfg.scenario), adversary_threshold(cfg),
               cfg.reps);
    fmt::print(out, "{:>8}  {:>11}  {:>14}\n", "n", "robust test", "classical test");
    for (const CellResult& cell : report.cells) {
        fmt::print(out, "{:>8}  {:>11.4f}  {:>14.4f}\n", cell.n, cell.rate_robust(), cell.rate_classical());
    }

    if (a.power) {
        write_power_csv(dir / "power_mu.csv", "mu", power_curve(cfg, PowerAxis::VaryMu));
        write_power_csv(dir / "power_n.csv", "n", power_curve(cfg, PowerAxis::VaryN));
        fmt::print(out, "power curves written to {}\n", dir.string());
    }
    return kExitOk;
}

int cmd_oracle_dp(const DpArgs& a, std::ostream& out)
{
    const VarianceBand band(a.sigma_lower, a.sigma_upper);
    const TestKind kind = parse_test_kind(a.kind);
    const double best = dp_max_rejection(a.n, a.c, band, kind);
    const double policy = dp_policy_value(a.n, a.c, band, kind);
    const double closed = max_false_rejection(kind, a.c, band);
    fmt::print(out, "dp_max_rejection {:.15g}\n", best);
    fmt::print(out, "dp_policy_value {:.15g}\n", policy);
    fmt::print(out, "policy_gap {:.15g}\n", best - policy);
    fmt::print(out, "closed_form {:.15g}\n", closed);
    fmt::print(out, "abs_gap {:.15g}\n", std::abs(best - closed));
    return kExitOk;
}

int cmd_oracle_pde(const PdeArgs& a, std::ostream& out)
{
    const VarianceBand band(a.sigma_lower, a.sigma_upper);
    const PDEGrid grid = PDEGrid::for_problem(a.c, band, a.dx, a.t0, a.courant);
    const double value = g_heat_solve(a.c, band, grid);
    const double closed = upper_tail_max(a.c, band);
    fmt::print(out, "g_heat_solve {:.15g}\n", value);
    fmt::print(out, "closed_form {:.15g}\n", closed);
    fmt::print(out, "abs_gap {:.15g}\n", std::abs(value - closed));
    return kExitOk;
}

}  // namespace

Eigen::VectorXd read_data_file(const fs::path& path, bool has_header)
{
    std::ifstream file(path);
    if (!file) {
        throw DataFileError("cannot read " + path.string());
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (has_header && line_no == 1) {
            continue;
        }
        const std::string_view field = trim(line);
        if (field.empty()) {
            continue;
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
            throw DataFileError(fmt::format("{}:{}: not a finite number: '{}'", path.string(), line_no, field));
        }
        values.push_back(value);
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Robust one-sample significance tests under variance uncertainty"};
    app.name(args.empty() ? "robusttest" : args.front());
    app.require_subcommand(1);

    CriticalValueArgs cv;
    auto* cv_cmd = app.add_subcommand("critical-value", "Robust critical value c1/c2/c3");
    cv_cmd->add_option("--kind", cv.kind, "Test variant I, II or III")->required();
    cv_cmd->add_option("--alpha", cv.alpha, "Significance level in (0, 0.5)")->required();
    cv_cmd->add_option("--sigma-lower", cv.sigma_lower)->required();
    cv_cmd->add_option("--sigma-upper", cv.sigma_upper)->required();

    TestArgs ta;
    auto* test_cmd = app.add_subcommand("test", "Robust and classical tests on a data file (JSON report)");
    test_cmd->add_option("--kind", ta.kind)->required();
    test_cmd->add_option("--mu0", ta.mu0)->required();
    test_cmd->add_option("--alpha", ta.alpha)->required();
    test_cmd->add_option("--data", ta.data, "One observation per line")->required();
    test_cmd->add_flag("--header", ta.header, "Skip the first line of the data file");
    test_cmd->add_option("--sigma-lower", ta.sigma_lower);
    test_cmd->add_option("--sigma-upper", ta.sigma_upper);
    test_cmd->add_option("--block-length", ta.block_length, "Estimate the band with moving blocks of this length");
    test_cmd->add_flag("--estimate-band", ta.estimate_band, "Estimate the band with the default block length");

    BoundsArgs ba;
    auto* bounds_cmd = app.add_subcommand("estimate-bounds", "Variance band estimates (JSON)");
    bounds_cmd->add_option("--data", ba.data)->required();
    bounds_cmd->add_flag("--header", ba.header);
    bounds_cmd->add_option("--block-length", ba.block_length, "Moving-block length (default ceil(sqrt(n)))");
    bounds_cmd->add_option("--subsamples", ba.subsamples, "Number of equal consecutive subsamples");

    SimulateArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo type-I error and power tables as CSV");
    sim_cmd->add_option("--scenario", sa.scenario, "sim1, sim2 or custom")->required();
    sim_cmd->add_option("--reps", sa.reps, "Repetitions per cell")->capture_default_str();
    sim_cmd->add_option("--seed", sa.seed, "Master seed (required)");
    sim_cmd->add_option("--out", sa.out_dir, "Output directory")->required();
    sim_cmd->add_flag("--power", sa.power, "Also write power_mu.csv and power_n.csv");
    sim_cmd->add_option("--workers", sa.workers, "Worker threads, 0 = all")->capture_default_str();
    sim_cmd->add_option("--sigma-lower", sa.sigma_lower);
    sim_cmd->add_option("--sigma-upper", sa.sigma_upper);
    sim_cmd->add_option("--mu0", sa.mu0);
    sim_cmd->add_option("--alpha", sa.alpha);
    sim_cmd->add_option("--n-list", sa.n_list, "Sample sizes of the type-I table")->delimiter(',');
    sim_cmd->add_option("--mu-grid", sa.mu_grid, "Means of the vary-mu power curve")->delimiter(',');
    sim_cmd->add_option("--power-n-grid", sa.power_n_grid, "Sample sizes of the vary-n power curve")->delimiter(',');
    sim_cmd->add_option("--power-n", sa.power_n, "Fixed n of the vary-mu power curve");
    sim_cmd->add_option("--power-mu", sa.power_mu, "Fixed mean of the vary-n power curve");
    sim_cmd->add_option("--target", sa.target, "Adversary threshold: classical or robust");
    sim_cmd->add_option("--adversary-c", sa.adversary_c, "Explicit adversary threshold");
    sim_cmd->add_option("--noise", sa.noise, "normal or rademacher")->capture_default_str();

    auto* oracle_cmd = app.add_subcommand("oracle", "Independent numerical checks of the tail law");
    oracle_cmd->require_subcommand(1);
    DpArgs da;
    auto* dp_cmd = oracle_cmd->add_subcommand("dp", "Exact lattice dynamic program under binary noise");
    dp_cmd->add_option("--n", da.n)->required();
    dp_cmd->add_option("--c", da.c)->required();
    dp_cmd->add_option("--sigma-lower", da.sigma_lower)->required();
    dp_cmd->add_option("--sigma-upper", da.sigma_upper)->required();
    dp_cmd->add_option("--kind", da.kind)->capture_default_str();
    PdeArgs pa;
    auto* pde_cmd = oracle_cmd->add_subcommand("pde", "Explicit finite differences for the G-heat equation");
    pde_cmd->add_option("--c", pa.c)->required();
    pde_cmd->add_option("--sigma-lower", pa.sigma_lower)->required();
    pde_cmd->add_option("--sigma-upper", pa.sigma_upper)->required();
    pde_cmd->add_option("--dx", pa.dx)->capture_default_str();
    pde_cmd->add_option("--t0", pa.t0)->capture_default_str();
    pde_cmd->add_option("--courant", pa.courant, "dt as a fraction of dx^2 / sigma_upper^2")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cv_cmd->parsed()) return cmd_critical_value(cv, out);
        if (test_cmd->parsed()) return cmd_test(ta, out);
        if (bounds_cmd->parsed()) return cmd_estimate_bounds(ba, out);
        if (sim_cmd->parsed()) return cmd_simulate(sa, out);
        if (dp_cmd->parsed()) return cmd_oracle_dp(da, out);
        if (pde_cmd->parsed()) return cmd_oracle_pde(pa, out);
    } catch (const ResourceError& e) {
        fmt::print(err, "resource error: {}\n", e.what());
        return kExitResource;
    } catch (const InsufficientDataError& e) {
        fmt::print(err, "data error: {}\n", e.what());
        return kExitData;
    } catch (const ShapeError& e) {
        fmt::print(err, "data error: {}\n", e.what());
        return kExitData;
    } catch (const DataFileError& e) {
        fmt::print(err, "data error: {}\n", e.what());
        return kExitData;
    } catch (const std::logic_error& e) {
        // DomainError, UnsupportedVariantError and std::invalid_argument.
        fmt::print(err, "usage error: {}\n", e.what());
        return kExitUsage;
    } catch (const ConfigurationError& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace robust::cli
