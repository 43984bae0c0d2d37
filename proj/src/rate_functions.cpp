#include "mdpvol/rate_functions.hpp"

#include <cmath>
#include <string>

#include "mdpvol/errors.hpp"

namespace mdpvol {
namespace {

constexpr double kGramFloor = 1e-12;
constexpr double kDegenerateQbar = 1e-14;

void require_nonzero(double v, const char* name) {
    if (v == 0.0 || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite and non-zero");
    }
}

void require_strict_rho(double rho) {
    if (!(std::abs(rho) < 1.0)) {
        throw DomainError("rho must satisfy |rho| < 1");
    }
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be positive");
    }
}

}  // namespace

std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> super, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || rhs.size() != n || (n > 1 && (sub.size() != n - 1 || super.size() != n - 1))) {
        throw DomainError("tridiagonal system: inconsistent sizes");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double m = sub[i - 1] / diag[i - 1];
            diag[i] -= m * super[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        if (diag[i] == 0.0 || !std::isfinite(diag[i])) {
            throw NumericError("tridiagonal system is singular");
        }
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
    }
    return x;
}

double small_time_rate_2d(double sigma0, double g0, double rho, const DiscretePath& phi,
                          const DiscretePath& psi) {
    require_nonzero(sigma0, "sigma0");
    require_nonzero(g0, "g0");
    require_strict_rho(rho);
    require_valid(phi);
    require_valid(psi);
    require_same_grid(phi, psi);
    if (phi.front() != 0.0 || psi.front() != 0.0) {
        return kInfiniteRate;
    }
    const double h = phi.step();
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.steps(); ++i) {
        const double a = phi.slope(i) / sigma0;
        const double b = psi.slope(i) / g0;
        sum += (a * a - 2.0 * rho * a * b + b * b) * h;
    }
    return sum / (2.0 * (1.0 - rho * rho));
}

double small_time_rate_1d(double sigma0, const DiscretePath& phi) {
    require_nonzero(sigma0, "sigma0");
    require_valid(phi);
    if (phi.front() != 0.0) {
        return kInfiniteRate;
    }
    const double h = phi.step();
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.steps(); ++i) {
        const double a = phi.slope(i);
        sum += a * a * h;
    }
    return sum / (2.0 * sigma0 * sigma0);
}

double general_quadratic_rate(const QuadraticRateSpec& spec, const std::vector<DiscretePath>& xi) {
    if (xi.size() != spec.dim || spec.dim == 0) {
        throw DomainError("path dimension does not match the rate specification");
    }
    for (const auto& p : xi) {
        require_valid(p);
        require_same_grid(p, xi.front());
    }
    if (xi.front().horizon != spec.horizon) {
        throw DomainError("path horizon does not match the rate specification");
    }
    for (const auto& p : xi) {
        if (p.front() != 0.0) {
            return kInfiniteRate;
        }
    }
    const auto d = static_cast<Eigen::Index>(spec.dim);
    const DiscretePath& grid = xi.front();
    const double h = grid.step();
    double sum = 0.0;
    Eigen::VectorXd slope(d);
    Eigen::VectorXd mid(d);
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double t = grid.time(i) + 0.5 * h;
        for (Eigen::Index k = 0; k < d; ++k) {
            const auto& p = xi[static_cast<std::size_t>(k)];
            slope(k) = p.slope(i);
            mid(k) = 0.5 * (p.values[i] + p.values[i + 1]);
        }
        const Eigen::MatrixXd gram = spec.diffusion_gram(t);
        const Eigen::MatrixXd jac = spec.drift_jacobian ? spec.drift_jacobian(t) : Eigen::MatrixXd::Zero(d, d);
        if (gram.rows() != d || gram.cols() != d || jac.rows() != d || jac.cols() != d) {
            throw DomainError("rate specification matrices have the wrong size");
        }
        if (!gram.isApprox(gram.transpose(), 1e-12)) {
            throw NumericError("diffusion Gram matrix is not symmetric at t = " + std::to_string(t));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() <= kGramFloor) {
            throw NumericError("diffusion Gram matrix is singular at t = " + std::to_string(t));
        }
        const Eigen::VectorXd r = slope - jac * mid - Eigen::VectorXd::Constant(d, spec.alpha);
        sum += r.dot(gram.ldlt().solve(r)) * h;
    }
    return 0.5 * sum;
}

Eigen::Matrix2d two_factor_gram(double sigma0, double g0, double rho) {
    Eigen::Matrix2d m;
    m << sigma0 * sigma0, rho * sigma0 * g0, rho * sigma0 * g0, g0 * g0;
    return m;
}

double heston_q_closed_form(double kappa, double theta, double xi, double rho, PricingMeasure measure) {
    const double sign = measure == PricingMeasure::Share ? 1.0 : -1.0;
    return theta * (1.0 + xi * xi / (4.0 * kappa * kappa) + sign * rho * xi / kappa);
}

LargeTimeParams large_time_params(const ModelSpec& model, const InvariantMeasure& measure,
                                  const PoissonSolution& phi, double gamma, double zeta) {
    if (!model.factor_only) {
        throw UnsupportedModelError("large-time constants need coefficients that depend on y only");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must lie in (0, inf)");
    }
    if (!std::isfinite(zeta)) {
        throw DomainError("zeta must be finite");
    }
    const double x0 = model.x0;
    const double rho = model.rho;
    const auto s2 = measure.integrate([&](double y) {
        const double s = model.sigma(x0, y);
        return s * s;
    });
    const auto q = measure.integrate([&](double y) {
        const double s = model.sigma(x0, y);
        const double pg = phi.u_prime_at(y) * model.g(x0, y);
        return s * s + pg * pg + 2.0 * rho * s * pg;
    });
    LargeTimeParams out;
    const double drift = model.measure == PricingMeasure::Share ? 0.5 : -0.5;
    out.alpha = zeta == 0.0 ? 0.0 : drift * zeta * s2.value;
    out.q = q.value;
    out.q_error = q.error_estimate;
    if (model.kind == ModelKind::Heston) {
        out.closed_form_q = heston_q_closed_form(model.params.kappa, model.params.theta, model.params.xi,
                                                 rho, model.measure);
    }
    return out;
}

QbarResult qbar_integrated(const ModelSpec& model, const InvariantMeasure& measure,
                           const PoissonSolution& u, double gamma) {
    if (!model.factor_only) {
        throw UnsupportedModelError("Qbar needs coefficients that depend on y only");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must lie in (0, inf)");
    }
    const double x0 = model.x0;
    const double v = measure
                         .integrate([&](double y) {
                             const double w = u.u_prime_at(y) * model.g(x0, y);
                             return w * w;
                         })
                         .value /
                     (gamma * gamma);
    return {v, v < kDegenerateQbar};
}

double endpoint_rate(double q, double alpha, double x_target, double horizon) {
    require_positive(q, "q");
    require_positive(horizon, "horizon");
    const double gap = x_target - alpha * horizon;
    return gap * gap / (2.0 * q * horizon);
}

EndpointMinimum minimize_endpoint(const std::function<double(double)>& q,
                                  const std::function<double(double)>& alpha, double x_target,
                                  double horizon, std::size_t n_steps) {
    if (n_steps < 2) {
        throw DomainError("n_steps must be at least 2");
    }
    require_positive(horizon, "horizon");
    if (!std::isfinite(x_target)) {
        throw DomainError("x_target must be finite");
    }
    const std::size_t n = n_steps;
    const double h = horizon / static_cast<double>(n);
    std::vector<double> qc(n);
    std::vector<double> ac(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * h;
        qc[i] = q(t);
        ac[i] = alpha(t);
        require_positive(qc[i], "q");
    }
    // Stationarity in phi_j, j = 1..n-1:
    // (s_{j-1} - a_{j-1}) / q_{j-1} - (s_j - a_j) / q_j = 0 with s_i = (phi_{i+1} - phi_i) / h.
    const std::size_t m = n - 1;
    std::vector<double> sub(m - 1);
    std::vector<double> diag(m);
    std::vector<double> super(m - 1);
    std::vector<double> rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = k + 1;
        const double left = 1.0 / (h * qc[j - 1]);
        const double right = 1.0 / (h * qc[j]);
        diag[k] = -(left + right);
        if (k > 0) {
            sub[k - 1] = left;
        }
        if (k + 1 < m) {
            super[k] = right;
        }
        rhs[k] = ac[j] / qc[j] - ac[j - 1] / qc[j - 1];
        if (j + 1 == n) {
            rhs[k] -= right * x_target;
        }
    }
    const auto interior = solve_tridiagonal(sub, diag, super, rhs);
    EndpointMinimum out;
    out.path.horizon = horizon;
    out.path.values.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        out.path.values[k + 1] = interior[k];
    }
    out.path.values[n] = x_target;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = out.path.slope(i) - ac[i];
        sum += v * v / qc[i] * h;
    }
    out.value = 0.5 * sum;
    return out;
}

EndpointMinimum minimize_endpoint(double q, double alpha, double x_target, double horizon,
                                  std::size_t n_steps) {
    require_positive(q, "q");
    if (!std::isfinite(alpha)) {
        throw DomainError("alpha must be finite");
    }
    return minimize_endpoint([q](double) { return q; }, [alpha](double) { return alpha; }, x_target, horizon,
                             n_steps);
}

Contraction contract_two_to_one(double sigma0, double g0, double rho, const DiscretePath& phi) {
    require_nonzero(sigma0, "sigma0");
    require_nonzero(g0, "g0");
    require_strict_rho(rho);
    require_valid(phi);
    const std::size_t n = phi.steps();
    const double h = phi.step();
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = phi.slope(i) / sigma0;
    }
    // Stationarity in psi_j: (b_{j-1} - rho a_{j-1}) - (b_j - rho a_j) = 0 for j < n and
    // b_{n-1} - rho a_{n-1} = 0 at the free end, with b_i = (psi_{i+1} - psi_i) / (h g0).
    std::vector<double> sub(n - 1, -1.0);
    std::vector<double> diag(n, 2.0);
    std::vector<double> super(n - 1, -1.0);
    std::vector<double> rhs(n);
    const double c = h * g0 * rho;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = k + 1;
        if (j < n) {
            rhs[k] = c * (a[j - 1] - a[j]);
        } else {
            diag[k] = 1.0;
            rhs[k] = c * a[j - 1];
        }
    }
    const auto psi_values = solve_tridiagonal(sub, diag, super, rhs);
    Contraction out;
    out.psi.horizon = phi.horizon;
    out.psi.values.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        out.psi.values[k + 1] = psi_values[k];
    }
    DiscretePath shifted = phi;
    shifted.values.front() = 0.0;
    out.value = phi.front() != 0.0 ? kInfiniteRate : small_time_rate_2d(sigma0, g0, rho, shifted, out.psi);
    return out;
}

ModelSpec share_measure_model(const ModelSpec& model) {
    if (!model.factor_only) {
        throw UnsupportedModelError("the Share-measure transform needs coefficients that depend on y only");
    }
    if (model.measure == PricingMeasure::Share) {
        throw DomainError("model is already written under the Share measure");
    }
    const double rho = model.rho;
    ModelSpec out;
    if (model.kind == ModelKind::Heston) {
        const auto& p = model.params;
        const double kq = p.kappa - rho * p.xi;
        if (!(kq > 0.0)) {
            throw DomainError("kappa - rho xi must be positive for the Share-measure factor (got " +
                              std::to_string(kq) + ")");
        }
        out = make_heston(kq, p.kappa * p.theta / kq, p.xi, rho, model.x0, model.y0);
    } else if (model.kind == ModelKind::SteinStein) {
        const auto& p = model.params;
        out = make_stein_stein(p.a, p.b + rho * p.c_g, p.c_g, rho, model.x0, model.y0);
    } else if (model.kind == ModelKind::PowerFamily &&
               model.params.nu_g + model.params.nu_sigma == 1.0) {
        const auto& p = model.params;
        const double bq = p.b + rho * p.c_g * p.c_sigma;
        if (has_cev_factor(model) && !(bq < 0.0)) {
            throw DomainError("Share-measure factor is not mean-reverting (b + rho c_g c_sigma >= 0)");
        }
        out = make_power_family(p.a, bq, p.c_g, p.c_sigma, p.nu_g, p.nu_sigma, rho, model.x0, model.y0);
    } else {
        out = model;
        const Coefficient f = model.f;
        const Coefficient g = model.g;
        const Coefficient sigma = model.sigma;
        out.f = [f, g, sigma, rho](double x, double y) { return f(x, y) + rho * g(x, y) * sigma(x, y); };
        out.kind = ModelKind::Custom;
    }
    out.moment_condition = model.moment_condition;
    out.measure = PricingMeasure::Share;
    return out;
}

}  // namespace mdpvol
