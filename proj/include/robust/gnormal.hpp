#pragma once

#include <cstddef>
#include <string_view>

namespace robust {

/// Interval of admissible per-observation standard deviations, [lower, upper].
///
/// Every tail law and threshold in this library is parameterized by a band.
/// Construction validates 0 < lower <= upper < inf and throws DomainError
/// otherwise.
class VarianceBand {
public:
    VarianceBand(double sigma_lower, double sigma_upper);

    /// Band with no uncertainty, lower == upper == sigma.
    static VarianceBand degenerate(double sigma) { return {sigma, sigma}; }

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool is_degenerate() const noexcept { return lower_ == upper_; }

    friend bool operator==(const VarianceBand&, const VarianceBand&) = default;

private:
    double lower_;
    double upper_;
};

/// I: H0 mu <= mu0 (upper tail); II: H0 mu >= mu0 (lower tail);
/// III: H0 mu == mu0 (two-sided).
enum class TestKind { I, II, III };

std::string_view to_string(TestKind kind);
/// Accepts "I", "II", "III" (case-insensitive, also "1", "2", "3").
TestKind parse_test_kind(std::string_view text);

/// Test variant, reference mean and level. Requires 0 < alpha < 0.5.
class TestSpec {
public:
    TestSpec(TestKind kind, double mu0, double alpha);

    TestKind kind() const noexcept { return kind_; }
    double mu0() const noexcept { return mu0_; }
    double alpha() const noexcept { return alpha_; }

private:
    TestKind kind_;
    double mu0_;
    double alpha_;
};

// Standard normal special functions.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate in the far right tail.
double std_normal_sf(double x);
/// Inverse of std_normal_cdf. Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// Largest asymptotic probability of {sqrt(n)(mean - mu0) > c} over all
/// predictable variance strategies inside the band.
double upper_tail_max(double c, const VarianceBand& band);

/// Same for the lower-tail event {sqrt(n)(mean - mu0) < c}. Equal to
/// upper_tail_max(-c) by reflection of the kernel.
double lower_tail_max(double c, const VarianceBand& band);

/// Two-sided event {sqrt(n)|mean - mu0| > c}, taken as min(1, 2 * upper_tail_max(c)).
/// Only meaningful for c > 0; for c <= 0 the clipping at 1 is active.
double two_sided_max(double c, const VarianceBand& band);

/// Dispatches to the tail law matching the test variant.
double max_false_rejection(TestKind kind, double c, const VarianceBand& band);

/// Robust critical value: the c that makes max_false_rejection equal alpha.
double critical_value(const TestSpec& spec, const VarianceBand& band);

/// Classical critical value for a known or estimated scale sigma.
double classical_critical_value(TestKind kind, double alpha, double sigma);

/// Self-similar profile f(y) of the G-heat solution started from the
/// indicator 1(x > c): u(t, x) = f((x - c) / sqrt(t)). f(-c) == upper_tail_max(c).
double self_similar_f(double y, const VarianceBand& band);

/// Second derivative of the profile; nonnegative exactly for y <= 0.
double self_similar_f_yy(double y, const VarianceBand& band);

/// Asymptotic power of the kind-I robust test at mean mu:
/// 1 - lower_tail_max(c1 - sqrt(n)(mu - mu0)).
/// Throws UnsupportedVariantError for kinds II and III.
double power_approx(std::size_t n, double mu, const TestSpec& spec, const VarianceBand& band);

}  // namespace robust
