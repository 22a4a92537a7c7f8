#include "robust/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "robust/errors.hpp"

namespace robust {

BlockConfig BlockConfig::default_for(std::size_t n)
{
    auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    return {std::clamp<std::size_t>(m, 2, std::max<std::size_t>(n, 2))};
}

std::string_view to_string(BandMethod method)
{
    return method == BandMethod::Subsample ? "subsample" : "moving-block";
}

double pooled_variance_mean(std::size_t n1, double var1, std::size_t n2, double var2)
{
    if (n1 == 0 || n2 == 0) {
        throw DomainError("pooled variance requires both sample sizes >= 1");
    }
    if (var1 < 0.0 || var2 < 0.0) {
        throw DomainError("variances must be nonnegative");
    }
    const auto a = static_cast<double>(n1);
    const auto b = static_cast<double>(n2);
    return (a * var1 + b * var2) / (a + b);
}

BandEstimate subsample_bounds(const DataRef& data, std::size_t k)
{
    const auto n = static_cast<std::size_t>(data.size());
    if (k == 0) {
        throw ShapeError("number of subsamples must be >= 1");
    }
    if (n % k != 0) {
        throw ShapeError("length " + std::to_string(n) + " is not divisible into " + std::to_string(k) + " blocks");
    }
    const std::size_t m = n / k;
    if (m < 2) {
        throw InsufficientDataError("each subsample needs at least 2 observations");
    }
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < k; ++i) {
        const double v = sample_stats(data.segment(static_cast<Eigen::Index>(i * m), static_cast<Eigen::Index>(m)))
                             .sample_variance;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi, BandMethod::Subsample, k, m};
}

Eigen::VectorXd moving_block_variances(const DataRef& data, const BlockConfig& cfg)
{
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto m = static_cast<Eigen::Index>(cfg.block_length);
    if (m < 2 || m > n) {
        throw ShapeError("block length must satisfy 2 <= m <= n (m = " + std::to_string(cfg.block_length) +
                         ", n = " + std::to_string(n) + ")");
    }
    const Eigen::Index windows = n - m + 1;
    const double md = static_cast<double>(m);
    Eigen::VectorXd out(windows);

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double shift = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double err = 0.0;  // bound on the rounding error accumulated in s2 - s1^2 / m
    auto refresh = [&](Eigen::Index start) {
        const auto window = data.segment(start, m);
        shift = window.mean();
        const auto centered = window.array() - shift;
        s1 = centered.sum();
        s2 = centered.square().sum();
        err = 0.0;
    };

    for (Eigen::Index l = 0; l < windows; ++l) {
        if (l % m == 0) {
            refresh(l);
        } else {
            const double leaving = data(l - 1) - shift;
            const double entering = data(l + m - 1) - shift;
            s1 += entering - leaving;
            s2 += entering * entering - leaving * leaving;
            err += 4.0 * eps *
                   (s2 + entering * entering + leaving * leaving +
                    2.0 * std::abs(s1) * (std::abs(s1) + std::abs(entering) + std::abs(leaving)) / md);
            if (err > 1e-12 * (s2 - s1 * s1 / md)) {
                refresh(l);
            }
        }
        out(l) = std::max(0.0, (s2 - s1 * s1 / md) / (md - 1.0));
    }
    return out;
}

BandEstimate moving_block_bounds(const DataRef& data, const BlockConfig& cfg)
{
    const Eigen::VectorXd v = moving_block_variances(data, cfg);
    return {v.minCoeff(), v.maxCoeff(), BandMethod::MovingBlock, static_cast<std::size_t>(v.size()),
            cfg.block_length};
}

VarianceBand band_from_estimate(const BandEstimate& estimate, bool* degenerate)
{
    const double lo = std::max(std::sqrt(estimate.lower_var), kMinEstimatedSigma);
    const double hi = std::max(std::sqrt(estimate.upper_var), lo);
    if (degenerate != nullptr) {
        *degenerate = estimate.lower_var <= 0.0 || estimate.lower_var == estimate.upper_var;
    }
    return {lo, hi};
}

TestReport estimate_then_test(const DataRef& data, std::optional<BlockConfig> cfg, const TestSpec& spec)
{
    const auto n = static_cast<std::size_t>(data.size());
    if (n < 2) {
        throw InsufficientDataError("at least 2 observations required, got " + std::to_string(n));
    }
    const BlockConfig block = cfg.value_or(BlockConfig::default_for(n));
    const BandEstimate estimate = moving_block_bounds(data, block);
    bool degenerate = false;
    const VarianceBand band = band_from_estimate(estimate, &degenerate);

    TestReport report = decide(data, spec, band);
    report.band_source = BandSource::Estimated;
    report.degenerate_band = degenerate;
    report.block_length = block.block_length;
    return report;
}

}  // namespace robust
