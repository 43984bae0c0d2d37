#include "mdpvol/scaling.hpp"

#include <cmath>
#include <string>

#include "mdpvol/errors.hpp"

namespace mdpvol {

void validate(const ScalingRegime& regime) {
    if (!(regime.beta > 0.0 && regime.beta < 0.5)) {
        throw DomainError("beta must lie in (0, 1/2) (got " + std::to_string(regime.beta) + ")");
    }
    if (!(regime.gamma > 0.0) || !std::isfinite(regime.gamma)) {
        throw DomainError("gamma must lie in (0, inf)");
    }
    if (!std::isfinite(regime.zeta_c)) {
        throw DomainError("zeta_c must be finite");
    }
}

double h_eval(const ScalingRegime& regime, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw DomainError("eps must lie in (0, 1] (got " + std::to_string(eps) + ")");
    }
    return std::pow(eps, -regime.beta);
}

double deviation_scale(const ScalingRegime& regime, double eps) {
    return std::sqrt(eps) * h_eval(regime, eps);
}

double eps_over_delta(const ScalingRegime& regime, double eps) {
    return regime.gamma + regime.zeta_c * deviation_scale(regime, eps);
}

double delta_for(const ScalingRegime& regime, double eps) {
    const double ratio = eps_over_delta(regime, eps);
    if (!(ratio > 0.0)) {
        throw DomainError("eps/delta must stay positive; reduce |zeta_c| or eps");
    }
    return eps / ratio;
}

ScaleMultipliers scale_multipliers(double eps, double delta) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw DomainError("eps must lie in (0, 1]");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("delta must lie in (0, 1]");
    }
    const double root = std::sqrt(eps);
    return {eps / delta, root, eps / (delta * delta), root / delta};
}

ScaledSystem rescaled_coefficients(const ModelSpec& model, double eps, double delta) {
    return {model, eps, delta, scale_multipliers(eps, delta)};
}

double tail_exponent(double nu_sigma, double nu_g) {
    if (!(nu_sigma > 0.0 && nu_sigma <= 1.0) || !(nu_g >= 0.0 && nu_g <= 1.0 - nu_sigma)) {
        throw DomainError("tail_exponent: need nu_sigma in (0, 1] and nu_g in [0, 1 - nu_sigma]");
    }
    return (1.0 - nu_g + nu_sigma) / (2.0 * (1.0 - nu_g));
}

double zeta_from_family(const ScalingRegime& regime) { return regime.zeta_c; }

}  // namespace mdpvol
