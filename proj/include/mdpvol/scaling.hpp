#pragma once

#include "mdpvol/model_zoo.hpp"

namespace mdpvol {

/// Moderate-deviation regime: h(eps) = eps^-beta and eps/delta = gamma + zeta_c sqrt(eps) h(eps).
struct ScalingRegime {
    double beta = 0.25;
    double gamma = 1.0;
    double zeta_c = 0.0;

    bool operator==(const ScalingRegime&) const = default;
};

/// Throws DomainError unless beta in (0, 1/2), gamma in (0, inf) and zeta_c finite.
void validate(const ScalingRegime& regime);

/// eps^-beta for eps in (0, 1].
double h_eval(const ScalingRegime& regime, double eps);

/// sqrt(eps) h(eps), the normalization of the deviation process.
double deviation_scale(const ScalingRegime& regime, double eps);

/// gamma + zeta_c sqrt(eps) h(eps).
double eps_over_delta(const ScalingRegime& regime, double eps);

/// delta solving eps/delta = eps_over_delta(regime, eps).
double delta_for(const ScalingRegime& regime, double eps);

/// Multipliers applied to (-sigma^2/2, sigma, f, g) in the eps-delta system.
struct ScaleMultipliers {
    double drift_x = 1.0;
    double diff_x = 1.0;
    double drift_y = 1.0;
    double diff_y = 1.0;

    bool operator==(const ScaleMultipliers&) const = default;
};

/// A model together with the multipliers of its rescaled system.
struct ScaledSystem {
    ModelSpec model;
    double eps = 1.0;
    double delta = 1.0;
    ScaleMultipliers multipliers;
};

ScaleMultipliers scale_multipliers(double eps, double delta);

/// {eps/delta, sqrt(eps), eps/delta^2, sqrt(eps)/delta}; eps, delta in (0, 1].
ScaledSystem rescaled_coefficients(const ModelSpec& model, double eps, double delta);

/// (1 - nu_g + nu_sigma) / (2 (1 - nu_g)) for a valid power family.
double tail_exponent(double nu_sigma, double nu_g);

/// The limit zeta, which the parametrization makes exact.
double zeta_from_family(const ScalingRegime& regime);

}  // namespace mdpvol
