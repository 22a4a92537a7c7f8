#include "robust/mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "robust/errors.hpp"
#include "robust/rules.hpp"

namespace robust {

namespace {

std::size_t resolve_workers(std::size_t requested, std::size_t tasks)
{
    std::size_t workers = requested;
    if (workers == 0) {
        workers = std::max<unsigned>(1, std::thread::hardware_concurrency());
    }
    return std::max<std::size_t>(1, std::min(workers, tasks));
}

struct Counts {
    std::size_t robust = 0;
    std::size_t classical = 0;
    std::size_t sd_above_upper = 0;
    std::size_t robust_only = 0;

    Counts& operator+=(const Counts& o)
    {
        robust += o.robust;
        classical += o.classical;
        sd_above_upper += o.sd_above_upper;
        robust_only += o.robust_only;
        return *this;
    }
};

}  // namespace

std::string_view to_string(Scenario scenario)
{
    switch (scenario) {
    case Scenario::Sim1: return "sim1";
    case Scenario::Sim2: return "sim2";
    case Scenario::Custom: return "custom";
    }
    return "?";
}

Scenario parse_scenario(std::string_view text)
{
    if (text == "sim1") return Scenario::Sim1;
    if (text == "sim2") return Scenario::Sim2;
    if (text == "custom") return Scenario::Custom;
    throw DomainError("unknown scenario '" + std::string(text) + "' (expected sim1, sim2 or custom)");
}

SimulationConfig SimulationConfig::preset(Scenario scenario, std::uint64_t seed)
{
    SimulationConfig cfg;
    cfg.scenario = scenario;
    cfg.seed = seed;
    cfg.n_list = {50, 100, 150, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
    cfg.target = scenario == Scenario::Sim1 ? AdversaryTarget::Classical : AdversaryTarget::Robust;
    for (int k = 1; k <= 20; ++k) {
        cfg.mu_list.push_back(0.02 * k);
    }
    cfg.power_n_grid = {50, 100, 150, 200, 300, 400, 500, 600, 700, 800, 900, 1000, 1250, 1500, 1750, 2000};
    return cfg;
}

void SimulationConfig::validate() const
{
    if (reps == 0) {
        throw DomainError("reps must be >= 1");
    }
    [[maybe_unused]] const TestSpec level_check(TestKind::I, mu0, alpha);
    if (scenario == Scenario::Sim1 && target != AdversaryTarget::Classical) {
        throw DomainError("scenario sim1 aims the adversary at the classical threshold");
    }
    if (scenario == Scenario::Sim2 && target != AdversaryTarget::Robust) {
        throw DomainError("scenario sim2 aims the adversary at the robust threshold");
    }
    for (std::size_t n : n_list) {
        if (n < 2) throw DomainError("every n must be >= 2");
    }
    for (std::size_t n : power_n_grid) {
        if (n < 2) throw DomainError("every n must be >= 2");
    }
    if (power_n < 2) {
        throw DomainError("power_n must be >= 2");
    }
}

double adversary_threshold(const SimulationConfig& cfg)
{
    switch (cfg.target) {
    case AdversaryTarget::Classical: return classical_critical_value(TestKind::I, cfg.alpha, cfg.band.upper());
    case AdversaryTarget::Robust: return critical_value(TestSpec(TestKind::I, cfg.mu0, cfg.alpha), cfg.band);
    case AdversaryTarget::Custom: return cfg.custom_c;
    }
    throw DomainError("invalid adversary target");
}

double binomial_se(double rate, std::size_t reps)
{
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

double CellResult::rate_robust() const { return static_cast<double>(reject_robust) / static_cast<double>(reps); }
double CellResult::rate_classical() const
{
    return static_cast<double>(reject_classical) / static_cast<double>(reps);
}
double CellResult::se_robust() const { return binomial_se(rate_robust(), reps); }
double CellResult::se_classical() const { return binomial_se(rate_classical(), reps); }

bool operator==(const CellResult& a, const CellResult& b)
{
    return a.n == b.n && a.mu == b.mu && a.reps == b.reps && a.reject_robust == b.reject_robust &&
           a.reject_classical == b.reject_classical && a.sd_above_upper == b.sd_above_upper &&
           a.robust_only == b.robust_only;
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t n, double mu, std::size_t rep)
{
    return mix_keys({seed, static_cast<std::uint64_t>(n), key_of(mu), static_cast<std::uint64_t>(rep)});
}

CellResult run_cell(std::size_t n, double mu, const SimulationConfig& cfg)
{
    cfg.validate();
    if (n < 2) {
        throw DomainError("run_cell requires n >= 2");
    }
    const TestSpec spec(TestKind::I, cfg.mu0, cfg.alpha);
    const Strategy strategy = cfg.strategy.value_or(Strategy{OptimalPolicy{TestKind::I, adversary_threshold(cfg)}});
    const RejectionRule robust = robust_rule(spec, cfg.band);
    const double classical_z = std_normal_quantile(1.0 - cfg.alpha);
    const double root_n = std::sqrt(static_cast<double>(n));

    auto run_range = [&](std::size_t begin, std::size_t end) {
        Counts counts;
        for (std::size_t r = begin; r < end; ++r) {
            Rng rng(repetition_seed(cfg.seed, n, mu, r));
            const Eigen::VectorXd z = generate_sequence(n, mu, cfg.mu0, strategy, cfg.noise, cfg.band, rng);
            const SampleStats stats = sample_stats(z);
            const double statistic = root_n * (stats.mean - cfg.mu0);
            const double sd = stats.sample_sd();
            const bool rob = rejects(robust, statistic);
            const bool cla = statistic > sd * classical_z;
            counts.robust += rob;
            counts.classical += cla;
            counts.sd_above_upper += sd > cfg.band.upper();
            counts.robust_only += rob && !cla;
        }
        return counts;
    };

    const std::size_t workers = resolve_workers(cfg.workers, cfg.reps);
    Counts total;
    if (workers == 1) {
        total = run_range(0, cfg.reps);
    } else {
        std::vector<Counts> partial(workers);
        {
            std::vector<std::jthread> threads;
            threads.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t begin = cfg.reps * w / workers;
                const std::size_t end = cfg.reps * (w + 1) / workers;
                threads.emplace_back([&, w, begin, end] { partial[w] = run_range(begin, end); });
            }
        }
        for (const Counts& c : partial) {
            total += c;
        }
    }

    CellResult cell;
    cell.n = n;
    cell.mu = mu;
    cell.reps = cfg.reps;
    cell.reject_robust = total.robust;
    cell.reject_classical = total.classical;
    cell.sd_above_upper = total.sd_above_upper;
    cell.robust_only = total.robust_only;
    return cell;
}

SimulationReport run_table(const SimulationConfig& cfg)
{
    SimulationReport report;
    report.cells.reserve(cfg.n_list.size());
    for (std::size_t n : cfg.n_list) {
        report.cells.push_back(run_cell(n, cfg.mu0, cfg));
    }
    return report;
}

std::vector<PowerPoint> power_curve(const SimulationConfig& cfg, PowerAxis axis)
{
    const TestSpec spec(TestKind::I, cfg.mu0, cfg.alpha);
    std::vector<PowerPoint> out;
    if (axis == PowerAxis::VaryMu) {
        for (double mu : cfg.mu_list) {
            if (!(mu > cfg.mu0)) {
                throw DomainError("power grid means must exceed mu0");
            }
            out.push_back({mu, run_cell(cfg.power_n, mu, cfg), power_approx(cfg.power_n, mu, spec, cfg.band)});
        }
    } else {
        if (!(cfg.power_mu > cfg.mu0)) {
            throw DomainError("power mean must exceed mu0");
        }
        for (std::size_t n : cfg.power_n_grid) {
            out.push_back({static_cast<double>(n), run_cell(n, cfg.power_mu, cfg),
                           power_approx(n, cfg.power_mu, spec, cfg.band)});
        }
    }
    return out;
}

}  // namespace robust
