#include <cmath>

#include <gtest/gtest.h>

#include "mdpvol/errors.hpp"
#include "mdpvol/scaling.hpp"

using namespace mdpvol;

TEST(Scaling, HEvalValues) {
    const ScalingRegime r;
    EXPECT_NEAR(h_eval(r, 0.01), 3.1622776601683795, 1e-14);
    EXPECT_DOUBLE_EQ(h_eval(r, 1.0), 1.0);
    EXPECT_THROW(h_eval(r, 0.0), DomainError);
    EXPECT_THROW(h_eval(r, 1.5), DomainError);
}

TEST(Scaling, HEvalDecreasingAndDeviationScaleVanishes) {
    const ScalingRegime r{0.3, 1.0, 0.0};
    double prev_h = 0.0;
    double prev_scale = 1e300;
    for (double eps = 1.0; eps > 1e-8; eps *= 0.5) {
        const double h = h_eval(r, eps);
        EXPECT_GT(h, prev_h);
        EXPECT_LT(deviation_scale(r, eps), prev_scale);
        prev_h = h;
        prev_scale = deviation_scale(r, eps);
    }
    EXPECT_LT(prev_scale, 0.03);
}

TEST(Scaling, RegimeValidation) {
    EXPECT_THROW(validate(ScalingRegime{0.7, 1.0, 0.0}), DomainError);
    EXPECT_THROW(validate(ScalingRegime{0.25, 0.0, 0.0}), DomainError);
    EXPECT_THROW(validate(ScalingRegime{0.25, 1.0, std::nan("")}), DomainError);
    EXPECT_NO_THROW(validate(ScalingRegime{0.25, 2.0, -1.0}));
}

TEST(Scaling, Multipliers) {
    EXPECT_EQ(scale_multipliers(1.0, 1.0), (ScaleMultipliers{1.0, 1.0, 1.0, 1.0}));
    const auto m = scale_multipliers(0.01, 1.0);
    EXPECT_DOUBLE_EQ(m.drift_x, 0.01);
    EXPECT_DOUBLE_EQ(m.diff_x, 0.1);
    EXPECT_DOUBLE_EQ(m.drift_y, 0.01);
    EXPECT_DOUBLE_EQ(m.diff_y, 0.1);
    EXPECT_NEAR(scale_multipliers(0.1, 0.1).drift_y, 10.0, 1e-12);
    EXPECT_THROW(scale_multipliers(0.0, 1.0), DomainError);
    EXPECT_THROW(scale_multipliers(0.5, 1.5), DomainError);
}

TEST(Scaling, RescaledCoefficientsCarryModel) {
    const ModelSpec m = make_heston(2.0, 0.1, 0.5, -0.5, 0.0, 0.1);
    const ScaledSystem s = rescaled_coefficients(m, 0.04, 0.2);
    EXPECT_DOUBLE_EQ(s.multipliers.drift_x, 0.2);
    EXPECT_DOUBLE_EQ(s.multipliers.diff_x, 0.2);
    EXPECT_NEAR(s.multipliers.drift_y, 1.0, 1e-15);
    EXPECT_NEAR(s.multipliers.diff_y, 1.0, 1e-15);
    EXPECT_EQ(s.model.kind, ModelKind::Heston);
}

TEST(Scaling, DeltaForInvertsRatio) {
    const ScalingRegime r{0.25, 2.0, 0.5};
    for (double eps : {0.5, 0.1, 0.01}) {
        EXPECT_NEAR(eps / delta_for(r, eps), eps_over_delta(r, eps), 1e-12);
    }
}

TEST(Scaling, TailExponent) {
    EXPECT_DOUBLE_EQ(tail_exponent(0.5, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(tail_exponent(1.0, 0.0), 1.0);
    EXPECT_NEAR(tail_exponent(0.25, 0.25), 2.0 / 3.0, 1e-15);
    EXPECT_THROW(tail_exponent(0.5, 0.6), DomainError);
    EXPECT_THROW(tail_exponent(0.0, 0.0), DomainError);
}

TEST(Scaling, ZetaIsTheParametrizationConstant) {
    EXPECT_EQ(zeta_from_family(ScalingRegime{0.25, 1.0, 0.0}), 0.0);
    EXPECT_EQ(zeta_from_family(ScalingRegime{0.25, 1.0, 0.5}), 0.5);
    EXPECT_EQ(zeta_from_family(ScalingRegime{0.25, 1.0, -1.0}), -1.0);
}
