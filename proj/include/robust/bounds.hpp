#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "robust/rules.hpp"

namespace robust {

/// Overlapping window length m for the moving-block estimators.
struct BlockConfig {
    std::size_t block_length;

    /// ceil(sqrt(n)), clamped to [2, n]. Used when no length is given.
    static BlockConfig default_for(std::size_t n);
};

enum class BandMethod { Subsample, MovingBlock };

std::string_view to_string(BandMethod method);

/// Estimated variance (not standard deviation) bounds.
struct BandEstimate {
    double lower_var;
    double upper_var;
    BandMethod method;
    std::size_t block_count;  // k for subsamples, L = n - m + 1 for moving blocks
    std::size_t block_length;
};

/// Expected unbiased variance of two pooled equal-mean samples:
/// (n1 var1 + n2 var2) / (n1 + n2). Throws DomainError on zero counts.
double pooled_variance_mean(std::size_t n1, double var1, std::size_t n2, double var2);

/// Min and max unbiased variance over k consecutive equal blocks.
BandEstimate subsample_bounds(const DataRef& data, std::size_t k);

/// Min and max unbiased variance over all n - m + 1 overlapping windows of
/// length m via rolling sums. The sums are recomputed from scratch every m
/// steps and whenever their rounding error bound exceeds 1e-12 relative.
BandEstimate moving_block_bounds(const DataRef& data, const BlockConfig& cfg);

/// All n - m + 1 window variances, same rolling scheme as moving_block_bounds.
Eigen::VectorXd moving_block_variances(const DataRef& data, const BlockConfig& cfg);

/// Lower standard deviations below this are clamped before testing.
inline constexpr double kMinEstimatedSigma = 1e-12;

/// Converts an estimate to a band by square roots, clamping at kMinEstimatedSigma.
/// Sets `degenerate` when the lower estimate is zero or equals the upper one.
VarianceBand band_from_estimate(const BandEstimate& estimate, bool* degenerate = nullptr);

/// Moving-block estimation followed by decide() on the estimated band.
/// `cfg` defaults to BlockConfig::default_for(n).
TestReport estimate_then_test(const DataRef& data, std::optional<BlockConfig> cfg, const TestSpec& spec);

}  // namespace robust
