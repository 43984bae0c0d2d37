#pragma once

#include <functional>
#include <limits>

namespace mdpvol {

/// Radicand of d(u): AsPrinted uses xi^2 u (1 - u^2), Standard uses xi^2 u (1 - u).
enum class DVariant { AsPrinted, Standard };

const char* to_string(DVariant variant);

/// Large-time log-price LDP data for Heston. Build with make_ldp_params.
struct LdpHestonParams {
    double kappa = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double rho = 0.0;
    DVariant d_variant = DVariant::AsPrinted;
    double zeta_hat = 0.0;  ///< sqrt(4 kappa^2 + xi^2 - 4 kappa rho xi)
    double u_minus = 0.0;
    double u_plus = 0.0;
};

/// Requires kappa, theta > 0, xi != 0, |rho| < 1.
LdpHestonParams make_ldp_params(double kappa, double theta, double xi, double rho,
                                DVariant variant = DVariant::AsPrinted);

double heston_d(const LdpHestonParams& p, double u);

/// Lambda(u) = (kappa theta / xi^2) (kappa - rho xi u - d(u)) on (u_minus, u_plus).
double heston_lambda(const LdpHestonParams& p, double u);
double heston_lambda_derivative(const LdpHestonParams& p, double u);

/// The closed-form maximizer u*(x).
double heston_u_star(const LdpHestonParams& p, double x);

/// u*(x) x - Lambda(u*(x)).
double heston_lambda_star(const LdpHestonParams& p, double x);

/// Realised-variance data for the Heston factor.
struct RealizedVarLdp {
    double kappa = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double y0 = 0.0;
    double u_max = 0.0;  ///< kappa^2 / (2 xi^2)
};

RealizedVarLdp make_rv_ldp(double kappa, double theta, double xi, double y0);

/// sqrt(kappa^2 - 2 xi^2 u).
double rv_gamma(const RealizedVarLdp& p, double u);

/// log E exp(u V_t) in closed form, evaluated in a form that stays finite for large t.
double rv_mgf(const RealizedVarLdp& p, double u, double t);

/// d/du log E exp(u V_t), by the same closed form.
double rv_mgf_derivative(const RealizedVarLdp& p, double u, double t);

/// (kappa theta / xi^2) (kappa - gamma(u)) for u < u_max.
double rv_lambda_inf(const RealizedVarLdp& p, double u);
double rv_lambda_inf_derivative(const RealizedVarLdp& p, double u);

/// kappa^2 (x - theta)^2 / (2 xi^2 x) for x > 0.
double rv_lambda_star(const RealizedVarLdp& p, double x);

/// A differentiable convex function on the open interval (lo, hi).
struct ConvexFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct LegendreResult {
    double value = 0.0;
    double argmax = 0.0;
};

/// sup_u {u x - fn(u)} by safeguarded Newton on fn'(u) = x with bisection fallback.
/// Throws NumericError when fn' does not reach x inside the domain.
LegendreResult fenchel_legendre_numeric(const ConvexFunction& fn, double x);

ConvexFunction rv_lambda_inf_function(const RealizedVarLdp& p);
ConvexFunction heston_lambda_function(const LdpHestonParams& p);

/// Five-point second difference with h = 1e-4 max(1, |x0|), Richardson-extrapolated with h/2.
double curvature(const std::function<double(double)>& fn, double x0);

}  // namespace mdpvol
