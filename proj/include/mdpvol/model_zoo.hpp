#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mdpvol {

enum class ModelKind { Heston, SteinStein, LSV, PowerFamily, ConstantSigma, Custom };

/// Measure under which the log-price dynamics are written. Under the Share
/// measure the log-price drift is +sigma^2/2 instead of -sigma^2/2.
enum class PricingMeasure { Physical, Share };

std::string to_string(ModelKind kind);

/// Declared growth exponents. These are metadata: they cannot be inferred
/// from arbitrary coefficient handles, so presets fill them in and custom
/// models must supply them.
struct GrowthExponents {
    std::optional<double> nu_sigma;  ///< sigma = c_sigma * y^nu_sigma (power form)
    std::optional<double> nu_g;      ///< g = c_g * y^nu_g (power form)
    std::optional<double> q_sigma;   ///< |sigma(y)| <= K (1 + |y|^q_sigma)
    std::optional<double> q_g;       ///< g(y) = xi * y^q_g, or 0 for bounded g
    std::optional<double> lipschitz_tau;  ///< L_tau in f(y) = -kappa y + tau(y)
    std::optional<double> mean_reversion;  ///< kappa in the same decomposition
    bool bounded_g = false;  ///< g bounded above and away from zero
};

/// Raw parameters of the preset the spec was built from. Unused entries are NaN.
struct ModelParams {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    double kappa = nan;
    double theta = nan;
    double xi = nan;
    double a = nan;
    double b = nan;
    double c_g = nan;
    double c_sigma = nan;
    double nu_g = nan;
    double nu_sigma = nan;
    double sigma = nan;  ///< ConstantSigma level
};

using Coefficient = std::function<double(double x, double y)>;

/// A two-factor model dX = -sigma^2/2 dt + sigma dW, dY = f dt + g dZ, d<W,Z> = rho dt.
/// Values are immutable after construction and safe to share between threads.
struct ModelSpec {
    ModelKind kind = ModelKind::Custom;
    Coefficient sigma;
    Coefficient f;
    Coefficient g;
    double rho = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;
    GrowthExponents growth;
    ModelParams params;
    PricingMeasure measure = PricingMeasure::Physical;
    /// Finite exponential moments of X for small times (declared by the caller).
    bool moment_condition = false;
    /// Coefficients depend on y only.
    bool factor_only = true;
    /// Coefficients evaluate y through max(y, 0).
    bool clamps_factor = false;
    /// LSV only: sigma(x, y) = local_vol(x) * vol_factor(y).
    std::function<double(double)> local_vol;
    std::function<double(double)> vol_factor;
};

struct CoefficientValues {
    double sigma;
    double f;
    double g;
};

ModelSpec make_heston(double kappa, double theta, double xi, double rho, double x0, double y0);
ModelSpec make_stein_stein(double a, double b, double c, double rho, double x0, double y0);
ModelSpec make_power_family(double a, double b, double c_g, double c_sigma, double nu_g,
                            double nu_sigma, double rho, double x0, double y0);

/// sigma identically equal to `sigma`; the factor is an Ornstein-Uhlenbeck
/// process dY = -Y dt + dZ that does not feed back into X.
ModelSpec make_constant_sigma(double sigma, double rho = 0.0, double x0 = 0.0, double y0 = 0.0);

/// Local-stochastic volatility sigma(x, y) = local_vol(x) * vol_factor(y).
ModelSpec make_lsv(std::function<double(double)> local_vol, std::function<double(double)> vol_factor,
                   Coefficient f, Coefficient g, double rho, double x0, double y0,
                   GrowthExponents growth);

/// Arbitrary coefficients; q_sigma and q_g must be declared.
ModelSpec make_custom(Coefficient sigma, Coefficient f, Coefficient g, double rho, double x0,
                      double y0, GrowthExponents growth, bool factor_only = true);

CoefficientValues eval_coeffs(const ModelSpec& model, double x, double y);

/// LSV initial-point volatility local_vol(x0) * vol_factor(y0); sigma(x0, y0) otherwise.
double initial_volatility(const ModelSpec& model);

/// True when the fast factor is a CEV diffusion kappa(theta - y) dt + xi y^q_g dZ
/// with q_g in [1/2, 1) (Heston included).
bool has_cev_factor(const ModelSpec& model);

struct CevFactor {
    double kappa;
    double theta;
    double xi;
    double q_g;
};

/// Throws UnsupportedModelError unless has_cev_factor(model).
CevFactor cev_factor(const ModelSpec& model);

struct AssumptionCheck {
    std::string id;
    bool passed;
    std::string detail;

    bool operator==(const AssumptionCheck&) const = default;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;

    const AssumptionCheck* find(const std::string& id) const;
    bool all_passed() const;
    bool operator==(const AssumptionReport&) const = default;
};

/// Extra declarations that some checks need: the growth exponent of an
/// integrated functional H and the moderate-deviation exponent beta.
struct AssumptionInputs {
    std::optional<double> q_h;
    std::optional<double> beta;
};

/// Evaluates every applicable growth and form condition on the declared
/// exponents. Check ids:
///   sigma_g_growth    q_sigma + q_g <= 1
///   drift_lipschitz   L_tau < kappa (when declared)
///   generic_growth    max(q_sigma + q_H, q_g + q_H) < 1 (needs q_H)
///   cev_growth        q_sigma < 1 and q_g + q_H < 2 for CEV factors (needs q_H)
///   cev_scaling       1/2 - beta (q_g + q_H - 1) / (1 - q_g) > 0 (needs q_H, beta)
///   power_form        nu_sigma in (0, 1], nu_g in [0, 1 - nu_sigma]
///   moment_condition  small-time exponential moments declared
AssumptionReport check_assumptions(const ModelSpec& model, const AssumptionInputs& inputs = {});

/// Exponent of epsilon in sqrt(eps) * h(eps)^((q_g + q_H - 1) / (1 - q_g)) with h = eps^-beta.
double cev_scaling_exponent(double q_g, double q_h, double beta);

}  // namespace mdpvol
