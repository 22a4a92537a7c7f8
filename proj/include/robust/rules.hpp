#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "robust/gnormal.hpp"

namespace robust {

/// Observation sequences are passed as column vectors. Any Eigen expression
/// (e.g. `x.array() - mu`) converts to this by evaluating into a temporary.
using DataRef = Eigen::Ref<const Eigen::VectorXd>;

enum class Method { Robust, Classical };
enum class Comparison { Greater, Less, AbsGreater };

Comparison comparison_for(TestKind kind);

struct RejectionRule {
    Method method;
    TestKind kind;
    double threshold;
    Comparison comparison;
};

/// Strict inequality: a statistic exactly on the threshold is not rejected.
bool rejects(const RejectionRule& rule, double statistic);

struct SampleStats {
    std::size_t n;
    double mean;
    double sample_variance;  // divisor n - 1

    double sample_sd() const;
};

/// Two-pass mean and unbiased variance. Throws InsufficientDataError for n < 2.
SampleStats sample_stats(const DataRef& data);

RejectionRule robust_rule(const TestSpec& spec, const VarianceBand& band);
RejectionRule classical_rule(const TestSpec& spec, const SampleStats& stats);

enum class BandSource { Known, Estimated };

struct TestReport {
    TestSpec spec;
    VarianceBand band_used;
    BandSource band_source = BandSource::Known;
    /// Estimated bands only: lower or both estimates collapsed and were clamped.
    bool degenerate_band = false;
    std::optional<std::size_t> block_length{};

    std::size_t n = 0;
    double mean = 0.0;
    double sample_sd = 0.0;
    double statistic = 0.0;  // sqrt(n) * (mean - mu0)
    double threshold_robust = 0.0;
    double threshold_classical = 0.0;
    bool reject_robust = false;
    bool reject_classical = false;
    /// Maximal false-rejection probability at the observed statistic.
    double robust_p_value = 1.0;
};

/// Evaluates the robust and the classical rule on the same data.
TestReport decide(const DataRef& data, const TestSpec& spec, const VarianceBand& band);

/// Kind I: upper_tail_max(s); kind II: lower_tail_max(s); kind III: two_sided_max(|s|).
double robust_p_value(double statistic, TestKind kind, const VarianceBand& band);

}  // namespace robust
