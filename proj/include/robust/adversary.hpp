#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "robust/gnormal.hpp"
#include "robust/rng.hpp"

namespace robust {

/// Distribution of the innovations: mean 0, variance 1.
enum class NoiseModel { StandardNormal, Rademacher };

std::string_view to_string(NoiseModel noise);
NoiseModel parse_noise_model(std::string_view text);

/// Threshold policy that maximizes the false-rejection probability of the
/// variant's rejection event at threshold c.
struct OptimalPolicy {
    TestKind kind;
    double c;
};

/// Honest baseline: the same sigma every step. Must lie inside the band.
struct ConstantPolicy {
    double sigma;
};

/// Upper sigma with probability p_upper, independently per step. The coin for
/// step i is a fixed function of (coin_seed, i), so it never looks at noise.
struct IidRandomPolicy {
    double p_upper;
    std::uint64_t coin_seed = 0;
};

/// Upper sigma on odd steps, lower on even steps.
struct AlternatingPolicy {};

using Strategy = std::variant<OptimalPolicy, ConstantPolicy, IidRandomPolicy, AlternatingPolicy>;

/// Information available before choosing the next sigma: `i` observations
/// seen so far and their centered sum xi = sum(Z_l - mu0).
struct PathState {
    std::size_t i = 0;
    double xi = 0.0;
};

/// Sigma for step state.i + 1 under the threshold policy of `kind`.
/// The first step always uses the upper sigma. Ties go to the upper sigma.
double optimal_sigma(TestKind kind, const PathState& state, std::size_t n, double c, const VarianceBand& band);

/// Sigma for step state.i + 1 under any strategy.
double choose_sigma(const Strategy& strategy, const PathState& state, std::size_t n, const VarianceBand& band);

/// Draws Z_i = sigma_i * eps_i + mu for i = 1..n with predictable sigma_i.
Eigen::VectorXd generate_sequence(std::size_t n, double mu, double mu0, const Strategy& strategy, NoiseModel noise,
                                  const VarianceBand& band, Rng& rng);

struct TraceStep {
    double sigma;
    double z;
    double xi;  // centered running sum including this step
};

/// generate_sequence with the per-step sigma and running sum disclosed.
/// Consumes the stream identically, so the z values match generate_sequence.
std::vector<TraceStep> strategy_trace(std::size_t n, double mu, double mu0, const Strategy& strategy,
                                      NoiseModel noise, const VarianceBand& band, Rng& rng);

/// Replays the strategy on the emitted z prefix and checks that every sigma
/// is reproduced exactly.
bool audit_predictability(const std::vector<TraceStep>& trace, double mu0, const Strategy& strategy,
                          const VarianceBand& band);

}  // namespace robust
