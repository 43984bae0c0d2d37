#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "mdpvol/errors.hpp"
#include "mdpvol/mc_engine.hpp"

using namespace mdpvol;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

SimConfig config(std::size_t paths, std::size_t steps, double t, std::uint64_t seed) {
    SimConfig c;
    c.n_paths = paths;
    c.n_steps = steps;
    c.t_end = t;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(McEngine, ConstantSigmaIsGaussian) {
    const double sigma = 0.2;
    const auto batch = simulate(make_constant_sigma(sigma), config(200000, 1, 1.0, 5));
    const double n = static_cast<double>(batch.size());
    const double var = sigma * sigma;
    EXPECT_NEAR(mean(batch.x_terminal), -0.5 * var, 4.0 * std::sqrt(var / n));
    EXPECT_NEAR(variance(batch.x_terminal), var, 4.0 * var * std::sqrt(2.0 / n));
}

TEST(McEngine, Deterministic) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    SimConfig c = config(10000, 20, 1.0, 42);
    const PathBatch a = simulate(m, c);
    EXPECT_EQ(a, simulate(m, c));
    c.threads = 3;
    EXPECT_EQ(a, simulate(m, c));
    c.seed = 43;
    EXPECT_NE(a, simulate(m, c));
}

TEST(McEngine, HestonFactorStaysNonNegative) {
    const auto batch = simulate(make_heston(2.0, 0.1, 1.5, -0.5, 0.0, 0.1), config(5000, 50, 1.0, 9));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        EXPECT_GE(batch.y_terminal[i], 0.0);
        EXPECT_GE(batch.integrated_variance[i], 0.0);
        EXPECT_GE(batch.running_max[i], batch.x_terminal[i]);
    }
}

TEST(McEngine, IntegratedVarianceMean) {
    const double kappa = 2.0, theta = 0.1, y0 = 0.3, t = 1.0;
    const auto batch = simulate(make_heston(kappa, theta, 0.5, -0.5, 0.0, y0), config(20000, 200, t, 17));
    const double expected = theta * t + (y0 - theta) * (1.0 - std::exp(-kappa * t)) / kappa;
    const double se = std::sqrt(variance(batch.integrated_variance) / batch.size());
    EXPECT_NEAR(mean(batch.integrated_variance), expected, 4.0 * se + 2e-3);
}

TEST(McEngine, AntitheticPairsMirror) {
    SimConfig c = config(1000, 1, 1.0, 3);
    c.antithetic = true;
    const auto batch = simulate(make_constant_sigma(0.2), c);
    ASSERT_EQ(batch.size(), 2000u);
    for (std::size_t i = 0; i < 1000; ++i) {
        EXPECT_NEAR(batch.x_terminal[2 * i] + batch.x_terminal[2 * i + 1], -0.04, 1e-14);
    }
}

TEST(McEngine, ValidateRejectsBadConfig) {
    const ModelSpec m = make_constant_sigma(0.2);
    EXPECT_THROW(simulate(m, config(0, 10, 1.0, 1)), DomainError);
    EXPECT_THROW(simulate(m, config(10, 0, 1.0, 1)), DomainError);
    EXPECT_THROW(simulate(m, config(10, 10, 0.0, 1)), DomainError);
}

TEST(McEngine, SmallTimeTailTargets) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const TailEstimate e = estimate_smalltime_tail(m, 0.01, 0.2, 0.25, config(20000, 10, 1.0, 1));
    EXPECT_NEAR(e.analytic_target, -0.2, 1e-14);
    EXPECT_EQ(e.n, 20000u);
    EXPECT_NEAR(e.ci_halfwidth, 1.959963984540054 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / e.n), 1e-15);
    const TailEstimate half = estimate_smalltime_tail(make_constant_sigma(0.2), 0.01, 0.0, 0.25,
                                                      config(100000, 1, 1.0, 2));
    EXPECT_NEAR(half.p_hat, 0.5, 0.01);
    EXPECT_THROW(estimate_smalltime_tail(m, 0.01, 0.2, 0.5, config(10, 1, 1.0, 1)), DomainError);
}

TEST(McEngine, RealisedVarianceTailTarget) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const TailEstimate e = estimate_rv_tail(m, 10.0, 0.05, 0.25, config(2000, 100, 1.0, 1));
    EXPECT_NEAR(e.analytic_target, -0.2, 1e-14);
    EXPECT_NEAR(e.threshold, 0.05 * std::pow(10.0, 0.75) + 1.0, 1e-12);
}

TEST(McEngine, ConstantSigmaCallMatchesBlackScholes) {
    const double sigma = 0.2, t = 0.01, k = 0.2, beta = 0.25;
    const CallEstimate c = estimate_call_smalltime(make_constant_sigma(sigma), t, k, beta, config(400000, 1, 1.0, 8));
    const double log_strike = k * std::sqrt(t) * std::pow(t, -beta);
    const double vol = sigma * std::sqrt(t);
    const double d1 = (-log_strike + 0.5 * vol * vol) / vol;
    const double bs = normal_cdf(d1) - std::exp(log_strike) * normal_cdf(d1 - vol);
    EXPECT_NEAR(c.strike_log, log_strike, 1e-15);
    EXPECT_NEAR(c.price, bs, 1.5 * c.ci_halfwidth);
    EXPECT_GE(c.holder_bound, c.price);
    EXPECT_NEAR(c.analytic_target, -0.5, 1e-14);
}

TEST(McEngine, CallRequiresPositiveStrike) {
    EXPECT_THROW(estimate_call_smalltime(make_constant_sigma(0.2), 0.01, 0.0, 0.25, config(10, 1, 1.0, 1)),
                 DomainError);
}

TEST(McEngine, DeriveSeed) {
    EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
    EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
    EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
}

TEST(McEngine, AntitheticReducesEstimatorVariance) {
    const ModelSpec m = make_constant_sigma(0.2);
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto plain = simulate(m, config(2000, 1, 1.0, seed));
        SimConfig c = config(1000, 1, 1.0, seed + 100);
        c.antithetic = true;
        const auto anti = simulate(m, c);
        std::vector<double> e_plain, e_pair;
        for (double x : plain.x_terminal) e_plain.push_back(std::exp(x));
        for (std::size_t i = 0; i < 1000; ++i) {
            e_pair.push_back(0.5 * (std::exp(anti.x_terminal[2 * i]) + std::exp(anti.x_terminal[2 * i + 1])));
        }
        if (variance(e_pair) / 1000.0 <= variance(e_plain) / 2000.0) ++wins;
    }
    EXPECT_GE(wins, 15);
}

TEST(McEngine, WeakOrderOneForFactorMean) {
    // Euler gives E[Y_n] = theta + (y0 - theta)(1 - kappa dt)^n, so the bias halves per doubling.
    const double kappa = 2.0, theta = 0.1, y0 = 0.3;
    const ModelSpec m = make_heston(kappa, theta, 0.1, 0.0, 0.0, y0);
    const double exact = theta + (y0 - theta) * std::exp(-kappa);
    std::vector<double> bias;
    for (std::size_t steps : {4, 8, 16}) {
        bias.push_back(std::abs(mean(simulate(m, config(100000, steps, 1.0, 21)).y_terminal) - exact));
    }
    EXPECT_GT(bias[0] / bias[1], 1.6);
    EXPECT_LT(bias[0] / bias[1], 2.6);
    EXPECT_GT(bias[1] / bias[2], 1.6);
    EXPECT_LT(bias[1] / bias[2], 2.6);
}
