#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "robust/bounds.hpp"
#include "robust/errors.hpp"

using namespace robust;

namespace {

Eigen::Map<const Eigen::VectorXd> view(const std::vector<double>& x)
{
    return {x.data(), static_cast<Eigen::Index>(x.size())};
}

struct Moments {
    double mean;
    double se;
};

Moments moments(const std::vector<double>& v)
{
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(v.size()))};
}

std::vector<double> two_regimes(std::mt19937_64& rng, std::size_t n1, double sd1, std::size_t n2, double sd2,
                                double mean = 0.0)
{
    std::normal_distribution<double> eps(0.0, 1.0);
    std::vector<double> x;
    x.reserve(n1 + n2);
    for (std::size_t i = 0; i < n1; ++i) x.push_back(mean + sd1 * eps(rng));
    for (std::size_t i = 0; i < n2; ++i) x.push_back(mean + sd2 * eps(rng));
    return x;
}

}  // namespace

TEST_CASE("subsample bounds on a small example")
{
    const std::vector<double> x{0, 2, 0, 2, 0, 4, 0, 4};
    const BandEstimate e = subsample_bounds(view(x), 2);
    CHECK(e.lower_var == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(e.upper_var == doctest::Approx(16.0 / 3.0).epsilon(1e-15));
    CHECK(e.block_count == 2);
    CHECK(e.block_length == 4);
    CHECK(e.method == BandMethod::Subsample);

    CHECK_THROWS_AS(subsample_bounds(view(x), 3), ShapeError);
    CHECK_THROWS_AS(subsample_bounds(view(x), 0), ShapeError);
    CHECK_THROWS_AS(subsample_bounds(view(x), 8), InsufficientDataError);
}

TEST_CASE("moving-block variances on a small example")
{
    const std::vector<double> x{0, 2, 0, 2, 0, 4, 0, 4};
    const Eigen::VectorXd v = moving_block_variances(view(x), {4});
    REQUIRE(v.size() == 5);
    for (Eigen::Index l = 0; l < v.size(); ++l) {
        CHECK(v(l) == doctest::Approx(oracle::block_variance(x, static_cast<std::size_t>(l), 4)).epsilon(1e-14));
    }
    const BandEstimate e = moving_block_bounds(view(x), {4});
    CHECK(e.block_count == 5);
    CHECK(e.lower_var == doctest::Approx(4.0 / 3.0));
    CHECK(e.upper_var == doctest::Approx(16.0 / 3.0));

    CHECK_THROWS_AS(moving_block_variances(view(x), {1}), ShapeError);
    CHECK_THROWS_AS(moving_block_variances(view(x), {9}), ShapeError);
    CHECK(moving_block_variances(view(x), {8}).size() == 1);
}

TEST_CASE("rolling variances match two-pass recomputation")
{
    std::mt19937_64 rng(99);
    for (double offset : {0.0, 5.0, -300.0}) {
        const std::vector<double> x = two_regimes(rng, 6000, 1.0, 4000, 0.5, offset);
        for (std::size_t m : {2, 17, 100, 1000}) {
            const Eigen::VectorXd v = moving_block_variances(view(x), {m});
            double worst = 0.0;
            for (Eigen::Index l = 0; l < v.size(); ++l) {
                const double ref = oracle::block_variance(x, static_cast<std::size_t>(l), m);
                worst = std::max(worst, std::abs(v(l) - ref) / ref);
            }
            INFO("offset " << offset << " m " << m);
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("moving-block bounds bracket every block and are attained")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> x = two_regimes(rng, 150 + trial, 1.0, 90, 0.3);
        const std::size_t m = 5 + static_cast<std::size_t>(trial);
        const BandEstimate e = moving_block_bounds(view(x), {m});
        bool lower_hit = false;
        bool upper_hit = false;
        for (std::size_t l = 0; l + m <= x.size(); ++l) {
            const double v = oracle::block_variance(x, l, m);
            CHECK(e.lower_var <= v * (1 + 1e-10));
            CHECK(e.upper_var >= v * (1 - 1e-10));
            lower_hit |= std::abs(v - e.lower_var) <= 1e-10 * v;
            upper_hit |= std::abs(v - e.upper_var) <= 1e-10 * v;
        }
        CHECK(lower_hit);
        CHECK(upper_hit);
    }
}

TEST_CASE("default block length")
{
    CHECK(BlockConfig::default_for(100).block_length == 10);
    CHECK(BlockConfig::default_for(101).block_length == 11);
    CHECK(BlockConfig::default_for(2).block_length == 2);
    CHECK(BlockConfig::default_for(3).block_length == 2);
}

TEST_CASE("band from estimate")
{
    bool degenerate = true;
    VarianceBand b = band_from_estimate({0.25, 1.0, BandMethod::MovingBlock, 10, 4}, &degenerate);
    CHECK(b.lower() == 0.5);
    CHECK(b.upper() == 1.0);
    CHECK_FALSE(degenerate);

    b = band_from_estimate({0.0, 1.0, BandMethod::MovingBlock, 10, 4}, &degenerate);
    CHECK(b.lower() == kMinEstimatedSigma);
    CHECK(degenerate);

    b = band_from_estimate({0.49, 0.49, BandMethod::Subsample, 2, 4}, &degenerate);
    CHECK(b.is_degenerate());
    CHECK(degenerate);
}

TEST_CASE("estimate then test")
{
    std::mt19937_64 rng(3);
    const std::vector<double> x = two_regimes(rng, 400, 1.0, 400, 0.5);
    const TestReport r = estimate_then_test(view(x), std::nullopt, TestSpec(TestKind::I, 0.0, 0.05));
    CHECK(r.band_source == BandSource::Estimated);
    REQUIRE(r.block_length.has_value());
    CHECK(*r.block_length == 29);
    const BandEstimate e = moving_block_bounds(view(x), {29});
    CHECK(r.band_used.lower() == std::sqrt(e.lower_var));
    CHECK(r.band_used.upper() == std::sqrt(e.upper_var));
    CHECK_FALSE(r.degenerate_band);

    const std::vector<double> flat(50, 2.0);
    const TestReport d = estimate_then_test(view(flat), BlockConfig{5}, TestSpec(TestKind::I, 0.0, 0.05));
    CHECK(d.degenerate_band);
    CHECK(d.band_used.lower() == kMinEstimatedSigma);

    CHECK_THROWS_AS(estimate_then_test(view(std::vector<double>{1.0}), std::nullopt, TestSpec(TestKind::I, 0.0, 0.05)),
                    InsufficientDataError);
}

TEST_CASE("subsample estimates are unbiased for the regime variances")
{
    std::mt19937_64 rng(2024);
    std::vector<double> upper;
    std::vector<double> lower;
    for (int rep = 0; rep < 2000; ++rep) {
        const std::vector<double> x = two_regimes(rng, 2000, 1.0, 2000, 0.5);
        const BandEstimate e = subsample_bounds(view(x), 2);
        upper.push_back(e.upper_var);
        lower.push_back(e.lower_var);
    }
    const Moments u = moments(upper);
    const Moments l = moments(lower);
    CHECK(std::abs(u.mean - 1.0) <= 3 * u.se);
    CHECK(std::abs(l.mean - 0.25) <= 3 * l.se);
}

TEST_CASE("pooled variance expectation")
{
    CHECK(pooled_variance_mean(30, 1.0, 10, 0.25) == doctest::Approx((30 * 1.0 + 10 * 0.25) / 40.0));
    CHECK_THROWS_AS(pooled_variance_mean(0, 1.0, 10, 0.25), DomainError);

    std::mt19937_64 rng(77);
    std::vector<double> pooled;
    for (int rep = 0; rep < 2000; ++rep) {
        const std::vector<double> x = two_regimes(rng, 30, 1.0, 10, 0.5, 3.0);
        pooled.push_back(oracle::block_variance(x, 0, x.size()));
    }
    const Moments p = moments(pooled);
    CHECK(std::abs(p.mean - pooled_variance_mean(30, 1.0, 10, 0.25)) <= 3 * p.se);
}

TEST_CASE("windows across a change point average between the regime variances")
{
    std::mt19937_64 rng(31);
    const std::size_t n1 = 200;
    const std::size_t m = 20;
    std::vector<std::vector<double>> straddling(m - 1);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::vector<double> x = two_regimes(rng, n1, 1.0, 200, 0.5);
        const Eigen::VectorXd v = moving_block_variances(view(x), {m});
        for (std::size_t j = 0; j + 1 < m; ++j) {
            straddling[j].push_back(v(static_cast<Eigen::Index>(n1 - m + 1 + j)));
        }
    }
    for (const auto& s : straddling) {
        const Moments w = moments(s);
        CHECK(w.mean >= 0.25 - 3 * w.se);
        CHECK(w.mean <= 1.0 + 3 * w.se);
    }
}

TEST_CASE("reductions")
{
    CHECK(pooled_variance_mean(100, 1.0, 100, 0.25) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(pooled_variance_mean(7, 0.3, 90, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(std::abs(pooled_variance_mean(1000000, 1.0, 1, 0.25) - 1.0) < 1e-5);

    const std::vector<double> flat(12, -4.0);
    for (std::size_t k : {1, 2, 3, 6}) {
        const BandEstimate e = subsample_bounds(view(flat), k);
        CHECK(e.lower_var == 0.0);
        CHECK(e.upper_var == 0.0);
    }
    const BandEstimate mb = moving_block_bounds(view(flat), {5});
    CHECK(mb.lower_var == 0.0);
    CHECK(mb.upper_var == 0.0);

    std::mt19937_64 rng(41);
    const std::vector<double> x = two_regimes(rng, 30, 1.0, 30, 0.4);
    const double full = oracle::block_variance(x, 0, x.size());
    const BandEstimate one = subsample_bounds(view(x), 1);
    CHECK(one.lower_var == doctest::Approx(full).epsilon(1e-13));
    CHECK(one.upper_var == doctest::Approx(full).epsilon(1e-13));
    const BandEstimate whole = moving_block_bounds(view(x), {x.size()});
    CHECK(whole.lower_var == doctest::Approx(full).epsilon(1e-13));
    CHECK(whole.upper_var == doctest::Approx(full).epsilon(1e-13));

    // A single full-length block makes the robust test the classical one.
    const TestReport r = estimate_then_test(view(x), BlockConfig{x.size()}, TestSpec(TestKind::I, 0.0, 0.05));
    CHECK(r.threshold_robust == doctest::Approx(r.threshold_classical).epsilon(1e-12));
    CHECK(r.reject_robust == r.reject_classical);
}

TEST_CASE("estimated band recovers the regime sigmas on long samples")
{
    std::mt19937_64 rng(20241018);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> x = two_regimes(rng, 20000, 1.0, 20000, 0.5, 0.1);
        const TestSpec spec(TestKind::I, 0.0, 0.05);
        const TestReport est = estimate_then_test(view(x), BlockConfig{2000}, spec);
        CHECK(std::abs(est.band_used.upper() - 1.0) <= 0.1);
        CHECK(std::abs(est.band_used.lower() - 0.5) <= 0.05);
        CHECK(est.reject_robust == decide(view(x), spec, VarianceBand(0.5, 1.0)).reject_robust);
    }
}
