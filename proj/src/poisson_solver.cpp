#include "mdpvol/poisson_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdpvol/errors.hpp"
#include "mdpvol/quadrature.hpp"

namespace mdpvol {
namespace {

constexpr std::size_t kCellNodes = 8;
constexpr std::size_t kStartNodes = 32;
constexpr double kGrowthFactor = 10.0;
constexpr double kGrowthFloor = 1e-10;
constexpr double kExtensionNats = 40.0;
constexpr std::size_t kMaxExtension = 20000;

std::size_t locate(const std::vector<double>& grid, double y) {
    auto it = std::upper_bound(grid.begin(), grid.end(), y);
    const auto i = static_cast<std::size_t>(it - grid.begin());
    return std::clamp<std::size_t>(i, 1, grid.size() - 1) - 1;
}

double hermite(double y0, double y1, double v0, double v1, double d0, double d1, double y) {
    const double h = y1 - y0;
    const double t = (y - y0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * v1 +
           (t3 - t2) * h * d1;
}

bool relatively_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

double PoissonSolution::u_at(double yv) const {
    if (closed_form) {
        return closed_form->slope * (yv - closed_form->center);
    }
    if (yv <= y.front()) {
        return u.front() + u_prime.front() * (yv - y.front());
    }
    if (yv >= y.back()) {
        return u.back() + u_prime.back() * (yv - y.back());
    }
    const std::size_t i = locate(y, yv);
    return hermite(y[i], y[i + 1], u[i], u[i + 1], u_prime[i], u_prime[i + 1], yv);
}

double PoissonSolution::u_prime_at(double yv) const {
    if (closed_form) {
        return closed_form->slope;
    }
    if (yv <= y.front()) {
        return u_prime.front();
    }
    if (yv >= y.back()) {
        return u_prime.back();
    }
    const std::size_t i = locate(y, yv);
    return hermite(y[i], y[i + 1], u_prime[i], u_prime[i + 1], u_second[i], u_second[i + 1], yv);
}

namespace {

PoissonSolution closed_form_solution(ClosedFormTag tag, double slope, double center, double lo, double hi,
                                     std::size_t points) {
    PoissonSolution s;
    s.closed_form = ClosedForm{tag, slope, center};
    s.y = quadrature::geometric_grid(lo, hi, points);
    for (double y : s.y) {
        s.u.push_back(slope * (y - center));
        s.u_prime.push_back(slope);
        s.u_second.push_back(0.0);
    }
    s.u_prime_left = s.u_prime;
    s.u_prime_right = s.u_prime;
    return s;
}

}  // namespace

PoissonSolution solve_phi_heston(double kappa, double theta, std::size_t grid_points) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw DomainError("kappa must be positive");
    }
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("theta must be positive");
    }
    if (grid_points < 3) {
        throw DomainError("grid_points must be at least 3");
    }
    // The Gamma law has mean theta, so centering at theta is exact.
    return closed_form_solution(ClosedFormTag::HestonPhiPrime, -1.0 / (2.0 * kappa), theta,
                                std::max(1e-10, 1e-6 * theta), 100.0 * theta, grid_points);
}

PoissonSolution solve_poisson_cev(const std::function<double(double)>& h, const InvariantMeasure& measure,
                                  double kappa, double theta, double xi, double q_g,
                                  const PoissonOptions& options) {
    if (!relatively_equal(kappa, measure.kappa()) || !relatively_equal(theta, measure.theta()) ||
        !relatively_equal(xi * xi, measure.xi() * measure.xi()) || q_g != measure.q_g()) {
        throw DomainError("measure parameters do not match (kappa, theta, xi, q_g)");
    }
    if (options.grid_points < 16) {
        throw DomainError("grid_points must be at least 16");
    }
    const double xi2 = xi * xi;
    const double two_q = 2.0 * q_g;
    const double h_bar = measure.integrate(h).value;
    auto psi = [&](double y) { return h(y) - h_bar; };

    PoissonSolution s;
    s.h_bar = h_bar;
    s.y = quadrature::geometric_grid(measure.lo(), measure.hi(), options.grid_points);
    const std::size_t n = s.y.size();
    std::vector<double> ell(n);
    for (std::size_t i = 0; i < n; ++i) {
        ell[i] = measure.log_density(s.y[i]);
    }

    // int_a^b psi m / m(ref) by Gauss-Legendre, with ref given as a log density.
    const auto& gl = quadrature::gauss_legendre(kCellNodes);
    auto cell_integral = [&](double a, double b, double ref) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t j = 0; j < kCellNodes; ++j) {
            const double z = mid + half * gl.nodes[j];
            acc += half * gl.weights[j] * psi(z) * std::exp(measure.log_density(z) - ref);
        }
        return acc;
    };
    std::vector<double> cell_left(n - 1);
    std::vector<double> cell_right(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cell_left[i] = cell_integral(s.y[i], s.y[i + 1], ell[i]);
        cell_right[i] = cell_integral(s.y[i], s.y[i + 1], ell[i + 1]);
    }

    // Beyond the grid the recursions run on extra cells of the same ratio until the
    // density has dropped by kExtensionNats, so the local start is damped by that factor.
    const double ratio = s.y[1] / s.y[0];
    auto extend = [&](double from, double factor) {
        std::vector<double> pts{from};
        const double floor = measure.log_density(from) - kExtensionNats;
        while (pts.size() < kMaxExtension && measure.log_density(pts.back()) > floor) {
            const double next = pts.back() * factor;
            if (!(next > 0.0) || !std::isfinite(next)) {
                break;
            }
            pts.push_back(next);
        }
        return pts;
    };

    // r(y) = int_0^y psi m / m(y), started below lo.
    std::vector<double> r_left(n);
    const double lo = s.y.front();
    if (q_g == 0.5) {
        const double a = 2.0 * kappa * theta / xi2;
        const double rate = 2.0 * kappa / xi2;
        r_left[0] = (lo / a) * quadrature::integrate(
                                   [&](double sv) {
                                       const double y = lo * std::pow(sv, 1.0 / a);
                                       return psi(y) * std::exp(-rate * (y - lo));
                                   },
                                   0.0, 1.0, kStartNodes);
    } else {
        const auto ext = extend(lo, 1.0 / ratio);
        double r = psi(ext.back()) / measure.log_density_slope(ext.back());
        for (std::size_t k = ext.size() - 1; k-- > 0;) {
            const double a = ext[k + 1];
            const double b = ext[k];
            const double lb = measure.log_density(b);
            r = r * std::exp(measure.log_density(a) - lb) + cell_integral(a, b, lb);
        }
        r_left[0] = r;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        r_left[i + 1] = r_left[i] * std::exp(ell[i] - ell[i + 1]) + cell_right[i];
    }
    // r(y) = -int_y^inf psi m / m(y), started above hi.
    std::vector<double> r_right(n);
    {
        const auto ext = extend(s.y[n - 1], ratio);
        double r = psi(ext.back()) / measure.log_density_slope(ext.back());
        for (std::size_t k = ext.size() - 1; k-- > 0;) {
            const double la = measure.log_density(ext[k]);
            r = r * std::exp(measure.log_density(ext[k + 1]) - la) - cell_integral(ext[k], ext[k + 1], la);
        }
        r_right[n - 1] = r;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        r_right[i] = r_right[i + 1] * std::exp(ell[i + 1] - ell[i]) - cell_left[i];
    }

    // Median of the measure from its quadrature rule.
    double median = measure.hi();
    {
        const auto& rule = measure.rule();
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            acc += rule.weights[i];
            if (acc >= 0.5) {
                median = rule.nodes[i];
                break;
            }
        }
    }

    s.u_prime.resize(n);
    s.u_prime_left.resize(n);
    s.u_prime_right.resize(n);
    s.u_second.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = s.y[i];
        const double g2 = xi2 * std::pow(y, two_q);
        s.u_prime_left[i] = 2.0 * r_left[i] / g2;
        s.u_prime_right[i] = 2.0 * r_right[i] / g2;
        s.u_prime[i] = y <= median ? s.u_prime_left[i] : s.u_prime_right[i];
        s.u_second[i] = 2.0 * (psi(y) - kappa * (theta - y) * s.u_prime[i]) / g2;
        if (!std::isfinite(s.u_prime[i])) {
            throw NumericError("Poisson quadrature produced a non-finite derivative at y = " + std::to_string(y));
        }
    }

    s.u.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s.u[i + 1] = s.u[i] + 0.5 * (s.u_prime[i] + s.u_prime[i + 1]) * (s.y[i + 1] - s.y[i]);
    }
    const double shift = measure.integrate([&](double y) { return s.u_at(y); }, 1.0).value;
    for (auto& v : s.u) {
        v -= shift;
    }
    s.centering_residual = std::abs(measure.integrate([&](double y) { return s.u_at(y); }, 1.0).value);

    // Growth of u' against K (1 + y^(q_H - 1)) with K fitted on the middle half of the grid.
    auto envelope = [&](double y) { return 1.0 + std::pow(y, options.q_h - 1.0); };
    double k_fit = 0.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
        k_fit = std::max(k_fit, std::abs(s.u_prime[i]) / envelope(s.y[i]));
    }
    const double y_max = s.y.back();
    if (std::abs(s.u_prime.back()) > kGrowthFactor * std::max(k_fit, kGrowthFloor) * envelope(y_max)) {
        throw NumericError("Poisson solution violates the growth bound K (1 + y^(q_H - 1)) at y_max = " +
                           std::to_string(y_max));
    }
    return s;
}

PoissonSolution solve_phi(const ModelSpec& model, const InvariantMeasure& measure) {
    const CevFactor cev = cev_factor(model);
    const double sign = model.measure == PricingMeasure::Share ? -1.0 : 1.0;
    if (model.kind == ModelKind::Heston) {
        auto s = solve_phi_heston(cev.kappa, cev.theta);
        s.closed_form->slope *= sign;
        for (auto* v : {&s.u, &s.u_prime, &s.u_prime_left, &s.u_prime_right}) {
            for (auto& x : *v) {
                x *= sign;
            }
        }
        return s;
    }
    const double x0 = model.x0;
    auto rhs = [&model, sign, x0](double y) {
        const double s = model.sigma(x0, y);
        return 0.5 * sign * s * s;
    };
    const double q_sigma = model.growth.q_sigma.value_or(1.0);
    return solve_poisson_cev(rhs, measure, cev.kappa, cev.theta, cev.xi, cev.q_g,
                             PoissonOptions{2.0 * q_sigma, 2048});
}

double generator_residual(const ModelSpec& model, const PoissonSolution& solution,
                          const std::function<double(double)>& rhs) {
    const auto& y = solution.y;
    const auto& up = solution.u_prime;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double upp = (up[i + 1] - up[i - 1]) / (y[i + 1] - y[i - 1]);
        const double f = model.f(model.x0, y[i]);
        const double g = model.g(model.x0, y[i]);
        worst = std::max(worst, std::abs(f * up[i] + 0.5 * g * g * upp - rhs(y[i])));
    }
    return worst;
}

}  // namespace mdpvol
