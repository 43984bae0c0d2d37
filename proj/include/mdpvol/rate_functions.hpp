#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mdpvol/invariant_measure.hpp"
#include "mdpvol/model_zoo.hpp"
#include "mdpvol/path.hpp"
#include "mdpvol/poisson_solver.hpp"

namespace mdpvol {

/// Value returned by a rate function for paths outside its effective domain.
inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

inline bool is_infinite_rate(double v) { return v == kInfiniteRate; }

/// (2 (1 - rho^2))^-1 int [(phi'/sigma0)^2 - 2 rho phi' psi' / (sigma0 g0) + (psi'/g0)^2] dt.
double small_time_rate_2d(double sigma0, double g0, double rho, const DiscretePath& phi,
                          const DiscretePath& psi);

/// (2 sigma0^2)^-1 int phi'^2 dt.
double small_time_rate_1d(double sigma0, const DiscretePath& phi);

/// Data of 1/2 int (xi' - Db xi - alpha)^T (a a^T)^-1 (xi' - Db xi - alpha) dt.
struct QuadraticRateSpec {
    std::size_t dim = 1;
    std::function<Eigen::MatrixXd(double)> drift_jacobian;
    std::function<Eigen::MatrixXd(double)> diffusion_gram;
    double alpha = 0.0;
    double horizon = 1.0;
};

/// Cells use forward differences for xi', the cell midpoint for xi and the
/// coefficient matrices. Throws NumericError on a Gram eigenvalue <= 1e-12.
double general_quadratic_rate(const QuadraticRateSpec& spec, const std::vector<DiscretePath>& xi);

/// Gram matrix ((sigma0^2, rho sigma0 g0), (rho sigma0 g0, g0^2)).
Eigen::Matrix2d two_factor_gram(double sigma0, double g0, double rho);

struct LargeTimeParams {
    double alpha = 0.0;
    double q = 0.0;
    double q_error = 0.0;
    /// theta (1 + xi^2 / (4 kappa^2) - rho xi / kappa) (sign of the last term flipped under Share).
    std::optional<double> closed_form_q;
};

/// Closed-form q for the Heston factor; `measure` selects the Physical or Share form.
/// The parameters are those of the dynamics under that measure.
double heston_q_closed_form(double kappa, double theta, double xi, double rho,
                            PricingMeasure measure = PricingMeasure::Physical);

/// alpha = -(zeta / 2) int sigma^2 dmu and q = int [sigma^2 + (Phi' g)^2 + 2 rho sigma g Phi'] dmu.
LargeTimeParams large_time_params(const ModelSpec& model, const InvariantMeasure& measure,
                                  const PoissonSolution& phi, double gamma, double zeta);

struct QbarResult {
    double value = 0.0;
    bool degenerate = false;
};

/// Qbar = gamma^-2 int (u' g)^2 dmu; degenerate when below 1e-14.
QbarResult qbar_integrated(const ModelSpec& model, const InvariantMeasure& measure,
                           const PoissonSolution& u, double gamma);

struct EndpointMinimum {
    double value = 0.0;
    DiscretePath path;
};

/// min 1/2 int v^2 over phi' = alpha + sqrt(q) v, phi_0 = 0, phi_T = x_target, solved
/// through the tridiagonal Euler-Lagrange system of the discretized problem.
EndpointMinimum minimize_endpoint(double q, double alpha, double x_target, double horizon,
                                  std::size_t n_steps);

/// Time-dependent coefficients sampled at cell midpoints.
EndpointMinimum minimize_endpoint(const std::function<double(double)>& q,
                                  const std::function<double(double)>& alpha, double x_target,
                                  double horizon, std::size_t n_steps);

/// Closed form (x - alpha T)^2 / (2 q T).
double endpoint_rate(double q, double alpha, double x_target, double horizon = 1.0);

struct Contraction {
    double value = 0.0;
    DiscretePath psi;
};

/// Minimizes small_time_rate_2d over psi (psi_0 = 0, free end) by a tridiagonal solve.
Contraction contract_two_to_one(double sigma0, double g0, double rho, const DiscretePath& phi);

/// Dynamics under the Share measure: log-price drift +sigma^2/2 and factor drift f + rho g sigma.
/// Heston stays Heston with kappa - rho xi and kappa theta / (kappa - rho xi).
ModelSpec share_measure_model(const ModelSpec& model);

/// Solves a tridiagonal system (sub, diag, super) x = rhs with the Thomas algorithm.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> super, std::vector<double> rhs);

}  // namespace mdpvol
