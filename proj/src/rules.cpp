#include "robust/rules.hpp"

#include <cmath>
#include <string>

#include "robust/errors.hpp"

namespace robust {

Comparison comparison_for(TestKind kind)
{
    switch (kind) {
    case TestKind::I: return Comparison::Greater;
    case TestKind::II: return Comparison::Less;
    case TestKind::III: return Comparison::AbsGreater;
    }
    throw DomainError("invalid test kind");
}

bool rejects(const RejectionRule& rule, double statistic)
{
    switch (rule.comparison) {
    case Comparison::Greater: return statistic > rule.threshold;
    case Comparison::Less: return statistic < rule.threshold;
    case Comparison::AbsGreater: return std::abs(statistic) > rule.threshold;
    }
    return false;
}

double SampleStats::sample_sd() const { return std::sqrt(sample_variance); }

SampleStats sample_stats(const DataRef& data)
{
    const auto n = static_cast<std::size_t>(data.size());
    if (n < 2) {
        throw InsufficientDataError("at least 2 observations required, got " + std::to_string(n));
    }
    const double mean = data.mean();
    const double ss = (data.array() - mean).square().sum();
    return {n, mean, ss / static_cast<double>(n - 1)};
}

RejectionRule robust_rule(const TestSpec& spec, const VarianceBand& band)
{
    return {Method::Robust, spec.kind(), critical_value(spec, band), comparison_for(spec.kind())};
}

RejectionRule classical_rule(const TestSpec& spec, const SampleStats& stats)
{
    if (stats.n < 2) {
        throw InsufficientDataError("classical rule needs n >= 2");
    }
    return {Method::Classical, spec.kind(), classical_critical_value(spec.kind(), spec.alpha(), stats.sample_sd()),
            comparison_for(spec.kind())};
}

double robust_p_value(double statistic, TestKind kind, const VarianceBand& band)
{
    if (kind == TestKind::III) {
        return two_sided_max(std::abs(statistic), band);
    }
    return max_false_rejection(kind, statistic, band);
}

TestReport decide(const DataRef& data, const TestSpec& spec, const VarianceBand& band)
{
    const SampleStats stats = sample_stats(data);
    const RejectionRule robust = robust_rule(spec, band);
    const RejectionRule classical = classical_rule(spec, stats);

    TestReport report{.spec = spec, .band_used = band};
    report.n = stats.n;
    report.mean = stats.mean;
    report.sample_sd = stats.sample_sd();
    report.statistic = std::sqrt(static_cast<double>(stats.n)) * (stats.mean - spec.mu0());
    report.threshold_robust = robust.threshold;
    report.threshold_classical = classical.threshold;
    report.reject_robust = rejects(robust, report.statistic);
    report.reject_classical = rejects(classical, report.statistic);
    report.robust_p_value = robust_p_value(report.statistic, spec.kind(), band);
    return report;
}

}  // namespace robust
