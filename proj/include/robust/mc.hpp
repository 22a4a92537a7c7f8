#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "robust/adversary.hpp"
#include "robust/gnormal.hpp"

namespace robust {

enum class Scenario { Sim1, Sim2, Custom };

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);

/// Threshold the kind-I adversary aims at.
enum class AdversaryTarget {
    Classical,  // c = sigma_upper * Phi^{-1}(1 - alpha)
    Robust,     // c = c1
    Custom,     // c = SimulationConfig::custom_c
};

struct SimulationConfig {
    Scenario scenario = Scenario::Custom;
    VarianceBand band{0.5, 1.0};
    double mu0 = 0.0;
    double alpha = 0.05;
    /// Sample sizes of the type-I table.
    std::vector<std::size_t> n_list;
    /// Means of the vary-mu power curve (all > mu0).
    std::vector<double> mu_list;
    std::size_t reps = 5000;
    std::uint64_t seed = 0;
    AdversaryTarget target = AdversaryTarget::Robust;
    double custom_c = 0.0;
    NoiseModel noise = NoiseModel::StandardNormal;
    /// Replaces the kind-I optimal adversary when set.
    std::optional<Strategy> strategy;
    /// 0 means all hardware threads. Never changes results.
    std::size_t workers = 0;

    // Fixed coordinates and n grid of the power curves.
    std::size_t power_n = 100;
    double power_mu = 0.1;
    std::vector<std::size_t> power_n_grid;

    /// The two simulated experiments: band (0.5, 1), mu0 = 0, alpha = 0.05,
    /// n in {50, 100, 150, 200, 300, ..., 1000}. Sim1 aims the adversary at the
    /// classical threshold, Sim2 at the robust one.
    static SimulationConfig preset(Scenario scenario, std::uint64_t seed);

    /// Throws DomainError on an invalid configuration.
    void validate() const;
};

/// Threshold c handed to the adversary under this configuration.
double adversary_threshold(const SimulationConfig& cfg);

/// Kind-I robust and classical rejections on identical data.
struct CellResult {
    std::size_t n = 0;
    double mu = 0.0;
    std::size_t reps = 0;
    std::size_t reject_robust = 0;
    std::size_t reject_classical = 0;
    /// Repetitions with sample sd above the upper sigma.
    std::size_t sd_above_upper = 0;
    /// Repetitions where the robust rule rejects and the classical one does not.
    std::size_t robust_only = 0;

    double rate_robust() const;
    double rate_classical() const;
    double se_robust() const;
    double se_classical() const;
};

bool operator==(const CellResult& a, const CellResult& b);

/// Binomial standard error sqrt(rate (1 - rate) / reps).
double binomial_se(double rate, std::size_t reps);

/// Seed of repetition `rep` in cell (n, mu):
/// mix_keys({seed, n, key_of(mu), rep}).
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t n, double mu, std::size_t rep);

CellResult run_cell(std::size_t n, double mu, const SimulationConfig& cfg);

struct SimulationReport {
    std::vector<CellResult> cells;
};

/// run_cell over n_list at mu = mu0.
SimulationReport run_table(const SimulationConfig& cfg);

enum class PowerAxis { VaryMu, VaryN };

struct PowerPoint {
    double grid_value;
    CellResult cell;
    double approx;
};

/// Paired empirical powers along one axis, with power_approx for overlay.
/// VaryMu uses power_n and mu_list; VaryN uses power_mu and power_n_grid.
std::vector<PowerPoint> power_curve(const SimulationConfig& cfg, PowerAxis axis);

}  // namespace robust
