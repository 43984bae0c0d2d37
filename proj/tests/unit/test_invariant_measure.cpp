#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mdpvol/errors.hpp"
#include "mdpvol/invariant_measure.hpp"

using namespace mdpvol;

namespace {

/// Gamma(shape, rate) density evaluated independently of the library.
double gamma_pdf(double y, double shape, double rate) {
    return std::exp(shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(y) - rate * y);
}

/// Trapezoid rule in s = log y over [lo, hi].
double log_trapezoid(const std::function<double(double)>& fn, double lo, double hi, int n) {
    const double a = std::log(lo);
    const double b = std::log(hi);
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double y = std::exp(a + h * i);
        sum += (i == 0 || i == n ? 0.5 : 1.0) * fn(y) * y;
    }
    return sum * h;
}

}  // namespace

TEST(InvariantMeasure, GammaShapeAndRate) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    EXPECT_EQ(mu.kind(), MeasureKind::GammaClosedForm);
    EXPECT_NEAR(mu.shape(), 1.6, 1e-15);
    EXPECT_NEAR(mu.rate(), 16.0, 1e-14);
    EXPECT_THROW(gamma_invariant(2.0, 0.1, 0.0), DomainError);
}

TEST(InvariantMeasure, GammaMoments) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    EXPECT_NEAR(mu.integrate([](double) { return 1.0; }).value, 1.0, 1e-10);
    EXPECT_NEAR(mu.integrate([](double y) { return y; }).value, 0.1, 1e-8);
    EXPECT_NEAR(mu.integrate([](double y) { return y * y; }).value, 0.01625, 1e-8);
}

TEST(InvariantMeasure, GammaDensityMatchesIndependentFormula) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    for (double y : {1e-4, 1e-3, 0.05, 0.1, 0.5, 1.0}) {
        EXPECT_NEAR(mu.density(y), gamma_pdf(y, 1.6, 16.0), 1e-12 * gamma_pdf(y, 1.6, 16.0));
    }
}

TEST(InvariantMeasure, SpeedMeasureAtHalfMatchesGamma) {
    const InvariantMeasure mu = speed_measure(2.0, 0.1, 0.5, 0.5);
    EXPECT_EQ(mu.kind(), MeasureKind::SpeedMeasureNumeric);
    double sup = 0.0;
    for (double y = 1e-4; y <= 2.0; y *= 1.01) {
        sup = std::max(sup, std::abs(mu.density(y) - gamma_pdf(y, 1.6, 16.0)));
    }
    EXPECT_LE(sup, 1e-8);
}

TEST(InvariantMeasure, SpeedMeasureNormalizedForHigherExponent) {
    const InvariantMeasure mu = speed_measure(2.0, 0.1, 0.5, 0.75);
    const double mass = log_trapezoid([&mu](double y) { return mu.density(y); }, mu.lo(), mu.hi(), 200000);
    EXPECT_NEAR(mass, 1.0, 1e-8);
    EXPECT_NEAR(mu.integrate([](double) { return 1.0; }).value, 1.0, 1e-10);
    // The drift is linear, so the mean is theta for every exponent.
    EXPECT_NEAR(mu.integrate([](double y) { return y; }).value, 0.1, 1e-8);
}

TEST(InvariantMeasure, SpeedMeasureRejectsExponentOne) {
    EXPECT_THROW(speed_measure(2.0, 0.1, 0.5, 1.0), DomainError);
    EXPECT_THROW(speed_measure(2.0, 0.1, 0.5, 0.4), DomainError);
}

TEST(InvariantMeasure, IntegrateRejectsFastGrowth) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    EXPECT_THROW(mu.integrate([](double y) { return std::exp(1e3 * y); }), NumericError);
}

TEST(InvariantMeasure, GammaMomentsOnRandomParameters) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double kappa = 0.5 + 4.5 * u(rng);
        const double theta = 0.01 + 0.99 * u(rng);
        const double xi = 0.1 + 0.9 * u(rng);
        const InvariantMeasure mu = gamma_invariant(kappa, theta, xi);
        const double mean = mu.integrate([](double y) { return y; }).value;
        const double second = mu.integrate([](double y) { return y * y; }).value;
        EXPECT_NEAR(mean, theta, 1e-8 * std::max(1.0, theta));
        EXPECT_NEAR(second - mean * mean, theta * xi * xi / (2.0 * kappa), 1e-8);
    }
}

TEST(InvariantMeasure, StationarityOfGenerator) {
    for (double q : {0.5, 0.6, 0.75, 0.9}) {
        const InvariantMeasure mu = q == 0.5 ? gamma_invariant(2.0, 0.1, 0.5) : speed_measure(2.0, 0.1, 0.5, q);
        EXPECT_NEAR(generator_expectation(mu, [](double y) { return 2.0 * y; }, [](double) { return 2.0; }), 0.0,
                    1e-8)
            << q;
        EXPECT_NEAR(generator_expectation(mu, [](double y) { return std::cos(y); },
                                          [](double y) { return -std::sin(y); }),
                    0.0, 1e-8)
            << q;
    }
}

TEST(InvariantMeasure, AveragedDrift) {
    const ModelSpec h = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    const auto lam = averaged_drift(h, mu, 1.0);
    EXPECT_NEAR(lam(0.0), -0.05, 1e-10);
    EXPECT_NEAR(lam(3.0), -0.05, 1e-10);
    EXPECT_NEAR(averaged_drift(h, mu, 2.0)(0.0), 2.0 * lam(0.0), 1e-14);
    const ModelSpec c = make_constant_sigma(0.3);
    EXPECT_NEAR(averaged_drift(c, mu, 1.5)(0.0), -1.5 * 0.09 / 2.0, 1e-12);
}

TEST(InvariantMeasure, AveragedStatePath) {
    const ModelSpec h = make_heston(2.0, 0.1, 0.5, -0.5, 0.3, 0.1);
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    const DiscretePath coarse = averaged_state_path(h, mu, 1.0, 1.0, 1);
    const DiscretePath fine = averaged_state_path(h, mu, 1.0, 1.0, 1000);
    EXPECT_NEAR(fine.back(), 0.3 - 0.05, 1e-10);
    EXPECT_NEAR(coarse.back(), fine.back(), 1e-12);
}
