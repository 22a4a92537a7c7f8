#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's special functions, so agreement is an independent check.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using real = long double;

constexpr real kPi = 3.141592653589793238462643383279502884L;

// erf by its Maclaurin series; good to ~1e-17 for |x| <= 2.5 in long double.
inline real erf_series(real x)
{
    real term = x;
    real sum = x;
    for (int k = 1; k < 400; ++k) {
        term *= -x * x / k;
        const real add = term / (2 * k + 1);
        sum += add;
        if (std::fabs(add) < 1e-24L * std::fabs(sum)) {
            break;
        }
    }
    return 2.0L / std::sqrt(kPi) * sum;
}

// erfc(x) for x >= 2 by the Laplace continued fraction, modified Lentz.
inline real erfc_cf(real x)
{
    const real tiny = 1e-300L;
    real f = x;
    real c = x;
    real d = 0.0L;
    for (int k = 1; k < 2000; ++k) {
        const real a = k / 2.0L;
        d = x + a * d;
        c = x + a / c;
        if (std::fabs(d) < tiny) d = tiny;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const real delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L) {
            break;
        }
    }
    return std::exp(-x * x) / std::sqrt(kPi) / f;
}

inline real normal_cdf(real x)
{
    const real y = x / std::sqrt(2.0L);
    if (y >= 2.0L) return 1.0L - 0.5L * erfc_cf(y);
    if (y <= -2.0L) return 0.5L * erfc_cf(-y);
    return 0.5L * (1.0L + erf_series(y));
}

inline real normal_sf(real x) { return normal_cdf(-x); }

// Bisection on normal_cdf.
inline real normal_quantile(real p)
{
    real lo = -40.0L;
    real hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const real mid = 0.5L * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

inline real normal_pdf(real z) { return std::exp(-0.5L * z * z) / std::sqrt(2.0L * kPi); }

// Integrand of the upper-tail capacity: upper-scale kernel right of 0,
// lower-scale kernel left of 0.
inline real upper_kernel(real z, real lo, real hi)
{
    return 2.0L / (hi + lo) * (z >= 0 ? normal_pdf(z / hi) : normal_pdf(z / lo));
}

// Mirror kernel of the lower-tail capacity.
inline real lower_kernel(real z, real lo, real hi)
{
    return 2.0L / (hi + lo) * (z <= 0 ? normal_pdf(z / hi) : normal_pdf(z / lo));
}

template <class F>
real integrate(F f, real a, real b)
{
    using boost::math::quadrature::gauss_kronrod;
    real error = 0;
    return gauss_kronrod<real, 61>::integrate(f, a, b, 20, 1e-15L, &error);
}

// Adaptive Gauss-Kronrod over [c, inf) with a breakpoint at the kernel's kink.
inline real upper_tail_quadrature(real c, real lo, real hi)
{
    auto f = [=](real z) { return upper_kernel(z, lo, hi); };
    const real inf = std::numeric_limits<real>::infinity();
    if (c >= 0) {
        return integrate(f, c, inf);
    }
    return integrate(f, c, 0.0L) + integrate(f, 0.0L, inf);
}

// Over (-inf, c].
inline real lower_tail_quadrature(real c, real lo, real hi)
{
    auto f = [=](real z) { return lower_kernel(z, lo, hi); };
    const real inf = std::numeric_limits<real>::infinity();
    if (c <= 0) {
        return integrate(f, -inf, c);
    }
    return integrate(f, -inf, 0.0L) + integrate(f, 0.0L, c);
}

// P(sigma * (2K - n) / sqrt(n) > c), K ~ Binomial(n, 1/2).
inline real binomial_walk_tail(std::size_t n, real sigma, real c)
{
    real total = 0;
    const real nn = static_cast<real>(n);
    for (std::size_t k = 0; k <= n; ++k) {
        const real kk = static_cast<real>(k);
        const real xi = sigma * (2 * kk - nn);
        if (xi / std::sqrt(nn) > c) {
            total += std::exp(std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) - nn * std::log(2.0L));
        }
    }
    return total;
}

// Unbiased variance of x[begin, begin + m), two passes.
inline double block_variance(const std::vector<double>& x, std::size_t begin, std::size_t m)
{
    long double mean = 0;
    for (std::size_t j = begin; j < begin + m; ++j) mean += x[j];
    mean /= static_cast<long double>(m);
    long double ss = 0;
    for (std::size_t j = begin; j < begin + m; ++j) ss += (x[j] - mean) * (x[j] - mean);
    return static_cast<double>(ss / static_cast<long double>(m - 1));
}

}  // namespace oracle
