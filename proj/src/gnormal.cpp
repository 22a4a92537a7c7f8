#include "robust/gnormal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "robust/errors.hpp"

namespace robust {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Wichura's AS241 (PPND16), relative accuracy about 1e-16.
double as241(double p)
{
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -x : x;
}

}  // namespace

VarianceBand::VarianceBand(double sigma_lower, double sigma_upper)
    : lower_(sigma_lower), upper_(sigma_upper)
{
    if (!(sigma_lower > 0.0) || !(sigma_lower <= sigma_upper) || !std::isfinite(sigma_upper)) {
        throw DomainError("variance band requires 0 < sigma_lower <= sigma_upper < inf, got [" +
                          std::to_string(sigma_lower) + ", " + std::to_string(sigma_upper) + "]");
    }
}

std::string_view to_string(TestKind kind)
{
    switch (kind) {
    case TestKind::I: return "I";
    case TestKind::II: return "II";
    case TestKind::III: return "III";
    }
    return "?";
}

TestKind parse_test_kind(std::string_view text)
{
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (upper == "I" || upper == "1") return TestKind::I;
    if (upper == "II" || upper == "2") return TestKind::II;
    if (upper == "III" || upper == "3") return TestKind::III;
    throw DomainError("unknown test kind '" + std::string(text) + "' (expected I, II or III)");
}

TestSpec::TestSpec(TestKind kind, double mu0, double alpha) : kind_(kind), mu0_(mu0), alpha_(alpha)
{
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw DomainError("alpha must lie in (0, 0.5), got " + std::to_string(alpha));
    }
    if (!std::isfinite(mu0)) {
        throw DomainError("mu0 must be finite");
    }
}

double std_normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal quantile requires 0 < p < 1, got " + std::to_string(p));
    }
    double x = as241(p);
    // One Newton step. The residual is taken in whichever tail keeps it exact.
    const double density = std_normal_pdf(x);
    if (density > 0.0) {
        const double residual = p < 0.5 ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_sf(x);
        x -= residual / density;
    }
    return x;
}

double upper_tail_max(double c, const VarianceBand& band)
{
    const double lo = band.lower();
    const double hi = band.upper();
    if (c >= 0.0) {
        return 2.0 * hi * std_normal_sf(c / hi) / (hi + lo);
    }
    // Right half contributes hi/2; the part of (c, 0) weighted by the lower scale.
    return (hi + lo * (1.0 - 2.0 * std_normal_cdf(c / lo))) / (hi + lo);
}

double lower_tail_max(double c, const VarianceBand& band) { return upper_tail_max(-c, band); }

double two_sided_max(double c, const VarianceBand& band) { return std::min(1.0, 2.0 * upper_tail_max(c, band)); }

double max_false_rejection(TestKind kind, double c, const VarianceBand& band)
{
    switch (kind) {
    case TestKind::I: return upper_tail_max(c, band);
    case TestKind::II: return lower_tail_max(c, band);
    case TestKind::III: return two_sided_max(c, band);
    }
    throw DomainError("invalid test kind");
}

double critical_value(const TestSpec& spec, const VarianceBand& band)
{
    const double hi = band.upper();
    const double mass = spec.alpha() * (hi + band.lower()) / (2.0 * hi);
    switch (spec.kind()) {
    case TestKind::I: return hi * std_normal_quantile(1.0 - mass);
    case TestKind::II: return hi * std_normal_quantile(mass);
    case TestKind::III: return hi * std_normal_quantile(1.0 - 0.5 * mass);
    }
    throw DomainError("invalid test kind");
}

double classical_critical_value(TestKind kind, double alpha, double sigma)
{
    switch (kind) {
    case TestKind::I: return sigma * std_normal_quantile(1.0 - alpha);
    case TestKind::II: return sigma * std_normal_quantile(alpha);
    case TestKind::III: return sigma * std_normal_quantile(1.0 - 0.5 * alpha);
    }
    throw DomainError("invalid test kind");
}

double self_similar_f(double y, const VarianceBand& band) { return upper_tail_max(-y, band); }

double self_similar_f_yy(double y, const VarianceBand& band)
{
    const double scale = y <= 0.0 ? band.upper() : band.lower();
    return -2.0 * y / (band.upper() + band.lower()) * std_normal_pdf(y / scale) / (scale * scale);
}

double power_approx(std::size_t n, double mu, const TestSpec& spec, const VarianceBand& band)
{
    if (spec.kind() != TestKind::I) {
        throw UnsupportedVariantError("power approximation is only available for kind I");
    }
    if (n == 0) {
        throw DomainError("power approximation requires n >= 1");
    }
    const double shift = std::sqrt(static_cast<double>(n)) * (mu - spec.mu0());
    return 1.0 - lower_tail_max(critical_value(spec, band) - shift, band);
}

}  // namespace robust
