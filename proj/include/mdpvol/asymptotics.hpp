#pragma once

#include <string>

#include "mdpvol/model_zoo.hpp"

namespace mdpvol {

enum class QuoteRegime { SmallTimeCall, LargeTimePut, LargeTimeCall, RvOptionLDP, RvOptionMDP, TailProb };

const char* to_string(QuoteRegime regime);

struct AsymptoticQuote {
    QuoteRegime regime;
    double exponent_value;
    /// Sign region of x or k where the exponent applies.
    std::string validity;
    /// Normalization of the log price or probability.
    std::string speed;
};

/// -k^2 / (2 sigma(0, y0)^2); needs k > 0 and the declared small-time moment condition.
double smalltime_call_exponent(const ModelSpec& model, double k);
AsymptoticQuote smalltime_call_quote(const ModelSpec& model, double k);

struct PutQuote {
    double leading = 0.0;
    double correction = 0.0;
};

/// (x, -t^(beta - 1/2) J(x)) for x < 0 and (x, 0) otherwise, with J(x) = x^2 / (2 q).
PutQuote largetime_put_quote(double q, double x, double beta, double t);

/// -x^2 / (2 q^Q) for x > 0 and 0 otherwise, with q^Q from the Share-measure dynamics.
double largetime_call_exponent(const ModelSpec& model, double x);

/// q under the Share measure by quadrature against the Share-measure invariant law.
double share_measure_q(const ModelSpec& model);

struct RvOptionQuotes {
    double ldp_quote = 0.0;
    double mdp_quote = 0.0;
};

/// (x - Lambda*(x), -J_V(x)) with J_V(x) = kappa^2 x^2 / (2 xi^2 theta); x > 0.
RvOptionQuotes rv_option_quotes(double kappa, double theta, double xi, double x);

/// -x^2 / (2 sigma(y0)^2 t) with sigma(y0) = c_sigma y0^nu_sigma.
double tail_probability_exponent(const ModelSpec& power_model, double x, double t);

}  // namespace mdpvol
