#include <cmath>

#include <gtest/gtest.h>

#include "mdpvol/errors.hpp"
#include "mdpvol/invariant_measure.hpp"
#include "mdpvol/poisson_solver.hpp"

using namespace mdpvol;

namespace {

double max_slope_error(const PoissonSolution& s, double expected, double lo, double hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        if (s.y[i] >= lo && s.y[i] <= hi) {
            worst = std::max(worst, std::abs(s.u_prime[i] - expected));
        }
    }
    return worst;
}

}  // namespace

TEST(Poisson, HestonClosedFormSlope) {
    const PoissonSolution s = solve_phi_heston(2.0, 0.1);
    ASSERT_TRUE(s.closed_form.has_value());
    for (double v : s.u_prime) {
        EXPECT_DOUBLE_EQ(v, -0.25);
    }
    for (double v : solve_phi_heston(0.5, 0.1).u_prime) {
        EXPECT_DOUBLE_EQ(v, -1.0);
    }
}

TEST(Poisson, HestonClosedFormIsCentered) {
    const PoissonSolution s = solve_phi_heston(2.0, 0.1);
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    EXPECT_NEAR(mu.integrate([&s](double y) { return s.u_at(y); }).value, 0.0, 1e-10);
}

TEST(Poisson, CirLinearFunctional) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    const PoissonSolution s = solve_poisson_cev([](double y) { return y; }, mu, 2.0, 0.1, 0.5, 0.5);
    EXPECT_LE(max_slope_error(s, -0.5, 0.01, 1.0), 1e-4);
    EXPECT_NEAR(s.h_bar, 0.1, 1e-8);
}

TEST(Poisson, CirHalfVarianceMatchesClosedForm) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    const PoissonSolution s = solve_poisson_cev([](double y) { return 0.5 * y; }, mu, 2.0, 0.1, 0.5, 0.5);
    const PoissonSolution c = solve_phi_heston(2.0, 0.1);
    for (double y : {0.01, 0.05, 0.1, 0.3, 1.0}) {
        EXPECT_NEAR(s.u_prime_at(y), c.u_prime_at(y), 1e-4) << y;
    }
}

TEST(Poisson, ConstantFunctionalGivesZero) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    const PoissonSolution s = solve_poisson_cev([](double) { return 3.0; }, mu, 2.0, 0.1, 0.5, 0.5);
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        EXPECT_NEAR(s.u[i], 0.0, 1e-12);
        EXPECT_NEAR(s.u_prime[i], 0.0, 1e-12);
    }
}

TEST(Poisson, LinearFunctionalForHigherExponent) {
    // L(-y/kappa) = y - theta holds for every exponent because the drift is linear.
    const InvariantMeasure mu = speed_measure(2.0, 0.1, 0.5, 0.75);
    const PoissonSolution s = solve_poisson_cev([](double y) { return y; }, mu, 2.0, 0.1, 0.5, 0.75);
    EXPECT_LE(max_slope_error(s, -0.5, 0.01, 1.0), 1e-4);
    const ModelSpec m = make_power_family(0.2, -2.0, 0.5, 1.0, 0.75, 0.25, 0.0, 0.0, 0.1);
    EXPECT_LE(generator_residual(m, s, [&s](double y) { return y - s.h_bar; }), 1e-5);
}

TEST(Poisson, GeneratorResidualOfClosedForm) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const PoissonSolution s = solve_phi_heston(2.0, 0.1);
    EXPECT_LE(generator_residual(m, s, [](double y) { return 0.5 * (y - 0.1); }), 1e-5);
}

TEST(Poisson, GeneratorResidualOfZeroSolution) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    PoissonSolution zero = solve_phi_heston(2.0, 0.1);
    std::fill(zero.u.begin(), zero.u.end(), 0.0);
    std::fill(zero.u_prime.begin(), zero.u_prime.end(), 0.0);
    EXPECT_EQ(generator_residual(m, zero, [](double) { return 0.0; }), 0.0);
}

TEST(Poisson, GeneratorResidualDetectsPerturbation) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    PoissonSolution s = solve_phi_heston(2.0, 0.1);
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        s.u[i] += 0.1 * s.y[i] * s.y[i];
        s.u_prime[i] += 0.2 * s.y[i];
    }
    // L(0.1 y^2) = 0.2 kappa (theta - y) y + 0.1 xi^2 y, equal to -0.335 at y = 1.
    EXPECT_GE(generator_residual(m, s, [](double y) { return 0.5 * (y - 0.1); }), 0.3);
}

TEST(Poisson, SmoothNonlinearFunctional) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    auto h = [](double y) { return std::exp(-5.0 * y); };
    const PoissonSolution s = solve_poisson_cev(h, mu, 2.0, 0.1, 0.5, 0.5);
    EXPECT_LE(generator_residual(m, s, [&](double y) { return h(y) - s.h_bar; }), 1e-5);
    EXPECT_NEAR(mu.integrate([&s](double y) { return s.u_at(y); }, 1.0).value, 0.0, 1e-10);
}

TEST(Poisson, SolvePhiFlipsSignUnderShare) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, 0.0, 0.0, 0.1);
    ModelSpec share = m;
    share.measure = PricingMeasure::Share;
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    EXPECT_DOUBLE_EQ(solve_phi(m, mu).u_prime_at(0.2), -0.25);
    EXPECT_DOUBLE_EQ(solve_phi(share, mu).u_prime_at(0.2), 0.25);
}

TEST(Poisson, MismatchedMeasureIsRejected) {
    const InvariantMeasure mu = gamma_invariant(2.0, 0.1, 0.5);
    EXPECT_THROW(solve_poisson_cev([](double y) { return y; }, mu, 3.0, 0.1, 0.5, 0.5), DomainError);
}
