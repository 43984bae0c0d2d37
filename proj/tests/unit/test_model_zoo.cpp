#include <cmath>

#include <gtest/gtest.h>

#include "mdpvol/errors.hpp"
#include "mdpvol/model_zoo.hpp"

using namespace mdpvol;

TEST(ModelZoo, HestonReferenceCoefficients) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    EXPECT_EQ(m.kind, ModelKind::Heston);
    EXPECT_DOUBLE_EQ(eval_coeffs(m, 0.0, 0.1).sigma, std::sqrt(0.1));
    EXPECT_DOUBLE_EQ(*m.growth.nu_sigma, 0.5);
    EXPECT_DOUBLE_EQ(*m.growth.nu_g, 0.5);
    const auto c = eval_coeffs(m, 0.0, 0.04);
    EXPECT_DOUBLE_EQ(c.sigma, 0.2);
    EXPECT_DOUBLE_EQ(c.f, 2.0 * (0.1 - 0.04));
    EXPECT_DOUBLE_EQ(c.g, 0.5 * 0.2);
}

TEST(ModelZoo, HestonClampsNegativeFactor) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const auto c = eval_coeffs(m, 0.0, -0.01);
    EXPECT_EQ(c.sigma, 0.0);
    EXPECT_EQ(c.g, 0.0);
    EXPECT_DOUBLE_EQ(c.f, 2.0 * 0.1);
}

TEST(ModelZoo, HestonRejectsNegativeKappa) {
    try {
        make_heston(-1.0, 0.1, 0.5, 0.0, 0.0, 0.1);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("kappa"), std::string::npos);
    }
}

TEST(ModelZoo, SteinSteinCoefficients) {
    const ModelSpec m = make_stein_stein(0.1, -1.0, 0.3, 0.0, 0.0, 0.2);
    EXPECT_DOUBLE_EQ(initial_volatility(m), 0.2);
    EXPECT_DOUBLE_EQ(eval_coeffs(m, 0.0, 0.5).f, -0.4);
    EXPECT_DOUBLE_EQ(*m.growth.nu_sigma, 1.0);
    EXPECT_DOUBLE_EQ(*m.growth.nu_g, 0.0);
    EXPECT_THROW(make_stein_stein(0.1, -1.0, 0.0, 0.0, 0.0, 0.2), DomainError);
}

TEST(ModelZoo, PowerFamilyReproducesHeston) {
    const double kappa = 2.0;
    const double theta = 0.1;
    const double xi = 0.5;
    const ModelSpec h = make_heston(kappa, theta, xi, -0.5, 0.0, 0.1);
    const ModelSpec p = make_power_family(kappa * theta, -kappa, xi, 1.0, 0.5, 0.5, -0.5, 0.0, 0.1);
    for (double y : {0.0, 0.01, 0.1, 0.7, 3.0}) {
        const auto a = eval_coeffs(h, 0.0, y);
        const auto b = eval_coeffs(p, 0.0, y);
        EXPECT_NEAR(a.sigma, b.sigma, 1e-15);
        EXPECT_NEAR(a.f, b.f, 1e-15);
        EXPECT_NEAR(a.g, b.g, 1e-15);
    }
}

TEST(ModelZoo, PowerFamilyReproducesSteinStein) {
    const ModelSpec s = make_stein_stein(0.1, -1.0, 0.3, 0.2, 0.0, 0.2);
    const ModelSpec p = make_power_family(0.1, -1.0, 0.3, 1.0, 0.0, 1.0, 0.2, 0.0, 0.2);
    for (double y : {-0.5, 0.0, 0.2, 1.5}) {
        const auto a = eval_coeffs(s, 0.0, y);
        const auto b = eval_coeffs(p, 0.0, y);
        EXPECT_NEAR(a.sigma, b.sigma, 1e-15);
        EXPECT_NEAR(a.f, b.f, 1e-15);
        EXPECT_NEAR(a.g, b.g, 1e-15);
    }
}

TEST(ModelZoo, PowerFamilyRejectsExponentsOutsideRegion) {
    EXPECT_THROW(make_power_family(0.2, -2.0, 0.5, 1.0, 0.6, 0.5, 0.0, 0.0, 0.1), DomainError);
}

TEST(ModelZoo, CevFactorDetection) {
    EXPECT_TRUE(has_cev_factor(make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1)));
    EXPECT_FALSE(has_cev_factor(make_stein_stein(0.1, -1.0, 0.3, 0.0, 0.0, 0.2)));
    EXPECT_TRUE(has_cev_factor(make_power_family(0.2, -2.0, 0.5, 1.0, 0.75, 0.25, 0.0, 0.0, 0.1)));
    EXPECT_THROW(cev_factor(make_constant_sigma(0.2)), UnsupportedModelError);
    const CevFactor c = cev_factor(make_power_family(0.2, -2.0, 0.5, 1.0, 0.75, 0.25, 0.0, 0.0, 0.1));
    EXPECT_DOUBLE_EQ(c.kappa, 2.0);
    EXPECT_DOUBLE_EQ(c.theta, 0.1);
    EXPECT_DOUBLE_EQ(c.q_g, 0.75);
}

TEST(ModelZoo, HestonWithLinearFunctionalUsesCevBranch) {
    const auto rep = check_assumptions(make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1), {1.0, 0.25});
    ASSERT_NE(rep.find("cev_growth"), nullptr);
    ASSERT_NE(rep.find("generic_growth"), nullptr);
    ASSERT_NE(rep.find("cev_scaling"), nullptr);
    EXPECT_TRUE(rep.find("cev_growth")->passed);
    EXPECT_TRUE(rep.find("cev_scaling")->passed);
    EXPECT_FALSE(rep.find("generic_growth")->passed);
    EXPECT_TRUE(rep.find("sigma_g_growth")->passed);
}

TEST(ModelZoo, SteinSteinGrowthSumPasses) {
    const auto rep = check_assumptions(make_stein_stein(0.1, -1.0, 0.3, 0.0, 0.0, 0.2));
    ASSERT_NE(rep.find("sigma_g_growth"), nullptr);
    EXPECT_TRUE(rep.find("sigma_g_growth")->passed);
    EXPECT_EQ(rep.find("cev_growth"), nullptr);
}

TEST(ModelZoo, ScalingConditionMatchesClosedFormBoundary) {
    // 1/2 - beta (q_g + q_H - 1) / (1 - q_g) > 0 with q_H = 1 is q_g < 1 / (2 beta + 1).
    for (double beta : {0.1, 0.2, 0.3, 0.4}) {
        for (double q_g = 0.5; q_g < 0.99; q_g += 0.013) {
            const bool expected = q_g < 1.0 / (2.0 * beta + 1.0);
            EXPECT_EQ(cev_scaling_exponent(q_g, 1.0, beta) > 0.0, expected) << beta << " " << q_g;
        }
    }
}

TEST(ModelZoo, MomentConditionIsDeclaredByCaller) {
    ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    EXPECT_FALSE(check_assumptions(m).find("moment_condition")->passed);
    m.moment_condition = true;
    EXPECT_TRUE(check_assumptions(m).find("moment_condition")->passed);
}

TEST(ModelZoo, CustomModelNeedsDeclaredExponents) {
    auto one = [](double, double) { return 1.0; };
    EXPECT_THROW(make_custom(one, one, one, 0.0, 0.0, 0.0, GrowthExponents{}), DomainError);
    GrowthExponents g;
    g.q_sigma = 0.0;
    g.q_g = 0.0;
    EXPECT_NO_THROW(make_custom(one, one, one, 0.0, 0.0, 0.0, g));
}

TEST(ModelZoo, LsvInitialVolatilityIsProduct) {
    GrowthExponents g;
    g.q_sigma = 0.5;
    g.q_g = 0.5;
    const ModelSpec m = make_lsv([](double x) { return 1.0 + x * x; }, [](double y) { return std::sqrt(y); },
                                 [](double, double y) { return 2.0 * (0.1 - y); },
                                 [](double, double y) { return 0.5 * std::sqrt(y); }, 0.0, 0.5, 0.04, g);
    EXPECT_NEAR(initial_volatility(m), 1.25 * 0.2, 1e-15);
    EXPECT_FALSE(m.factor_only);
}
