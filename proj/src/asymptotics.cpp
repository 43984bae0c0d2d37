#include "mdpvol/asymptotics.hpp"

#include <cmath>
#include <string>

#include "mdpvol/errors.hpp"
#include "mdpvol/invariant_measure.hpp"
#include "mdpvol/ldp.hpp"
#include "mdpvol/poisson_solver.hpp"
#include "mdpvol/rate_functions.hpp"

namespace mdpvol {

const char* to_string(QuoteRegime regime) {
    switch (regime) {
        case QuoteRegime::SmallTimeCall: return "small_time_call";
        case QuoteRegime::LargeTimePut: return "large_time_put";
        case QuoteRegime::LargeTimeCall: return "large_time_call";
        case QuoteRegime::RvOptionLDP: return "rv_option_ldp";
        case QuoteRegime::RvOptionMDP: return "rv_option_mdp";
        case QuoteRegime::TailProb: return "tail_probability";
    }
    return "unknown";
}

double smalltime_call_exponent(const ModelSpec& model, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("k must be positive for the small-time call exponent");
    }
    if (!model.moment_condition) {
        throw DomainError(
            "small-time moment condition not declared: exponential moments of X_t must be finite for every "
            "p >= 1 and small t (set moment_condition on the model)");
    }
    const double s = model.sigma(0.0, model.y0);
    if (s == 0.0) {
        throw DomainError("sigma(0, y0) must be non-zero");
    }
    return -k * k / (2.0 * s * s);
}

AsymptoticQuote smalltime_call_quote(const ModelSpec& model, double k) {
    return {QuoteRegime::SmallTimeCall, smalltime_call_exponent(model, k), "k > 0", "h(t)^2"};
}

PutQuote largetime_put_quote(double q, double x, double beta, double t) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw DomainError("q must be positive");
    }
    if (!(beta > 0.0 && beta < 0.5)) {
        throw DomainError("beta must lie in (0, 1/2)");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("t must be positive");
    }
    if (!(x < 0.0)) {
        return {x, 0.0};
    }
    return {x, -std::pow(t, beta - 0.5) * endpoint_rate(q, 0.0, x, 1.0)};
}

double share_measure_q(const ModelSpec& model) {
    const ModelSpec share = share_measure_model(model);
    const InvariantMeasure measure = invariant_measure_for(share);
    const PoissonSolution phi = solve_phi(share, measure);
    return large_time_params(share, measure, phi, 1.0, 0.0).q;
}

double largetime_call_exponent(const ModelSpec& model, double x) {
    if (!std::isfinite(x)) {
        throw DomainError("x must be finite");
    }
    const double q = share_measure_q(model);
    if (!(x > 0.0)) {
        return 0.0;
    }
    return -endpoint_rate(q, 0.0, x, 1.0);
}

RvOptionQuotes rv_option_quotes(double kappa, double theta, double xi, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("x must be positive");
    }
    const auto p = make_rv_ldp(kappa, theta, xi, theta);
    const double j_v = kappa * kappa * x * x / (2.0 * xi * xi * theta);
    return {x - rv_lambda_star(p, x), -j_v};
}

double tail_probability_exponent(const ModelSpec& power_model, double x, double t) {
    if (power_model.kind != ModelKind::PowerFamily && power_model.kind != ModelKind::Heston &&
        power_model.kind != ModelKind::SteinStein) {
        throw UnsupportedModelError("tail_probability_exponent needs a power-family model");
    }
    const auto& p = power_model.params;
    if (!(p.nu_g <= 1.0 - p.nu_sigma)) {
        throw DomainError("nu_g must not exceed 1 - nu_sigma");
    }
    if (!(x > power_model.x0)) {
        throw DomainError("x must exceed x0");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("t must be positive");
    }
    const double s = p.c_sigma * std::pow(power_model.y0, p.nu_sigma);
    return -x * x / (2.0 * s * s * t);
}

}  // namespace mdpvol
