#include "mdpvol/ldp.hpp"

#include <cmath>
#include <string>

#include "mdpvol/errors.hpp"

namespace mdpvol {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kBracketShrink = 1e-10;

void require_heston_inputs(double kappa, double theta, double xi) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw DomainError("kappa must be positive");
    }
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("theta must be positive");
    }
    if (xi == 0.0 || !std::isfinite(xi)) {
        throw DomainError("xi must be non-zero");
    }
}

std::string num(double v) { return std::to_string(v); }

}  // namespace

const char* to_string(DVariant variant) {
    return variant == DVariant::AsPrinted ? "as_printed" : "standard";
}

LdpHestonParams make_ldp_params(double kappa, double theta, double xi, double rho, DVariant variant) {
    require_heston_inputs(kappa, theta, xi);
    if (!(std::abs(rho) < 1.0)) {
        throw DomainError("rho must satisfy |rho| < 1");
    }
    LdpHestonParams p;
    p.kappa = kappa;
    p.theta = theta;
    p.xi = xi;
    p.rho = rho;
    p.d_variant = variant;
    p.zeta_hat = std::sqrt(4.0 * kappa * kappa + xi * xi - 4.0 * kappa * rho * xi);
    const double denom = 2.0 * xi * (1.0 - rho * rho);
    const double a = (xi - 2.0 * kappa * rho - p.zeta_hat) / denom;
    const double b = (xi - 2.0 * kappa * rho + p.zeta_hat) / denom;
    p.u_minus = std::min(a, b);
    p.u_plus = std::max(a, b);
    return p;
}

double heston_d(const LdpHestonParams& p, double u) {
    const double base = p.kappa - p.rho * p.xi * u;
    const double tail = p.d_variant == DVariant::AsPrinted ? u * (1.0 - u * u) : u * (1.0 - u);
    const double radicand = base * base + p.xi * p.xi * tail;
    if (radicand < 0.0) {
        throw DomainError("d(u): negative radicand at u = " + num(u));
    }
    return std::sqrt(radicand);
}

namespace {

void require_in_strip(const LdpHestonParams& p, double u) {
    if (!(u > p.u_minus && u < p.u_plus)) {
        throw DomainError("u = " + num(u) + " lies outside (u_minus, u_plus) = (" + num(p.u_minus) + ", " +
                          num(p.u_plus) + ")");
    }
}

}  // namespace

double heston_lambda(const LdpHestonParams& p, double u) {
    require_in_strip(p, u);
    return p.kappa * p.theta / (p.xi * p.xi) * (p.kappa - p.rho * p.xi * u - heston_d(p, u));
}

double heston_lambda_derivative(const LdpHestonParams& p, double u) {
    require_in_strip(p, u);
    const double base = p.kappa - p.rho * p.xi * u;
    const double tail_prime = p.d_variant == DVariant::AsPrinted ? 1.0 - 3.0 * u * u : 1.0 - 2.0 * u;
    const double d_prime = (-2.0 * p.rho * p.xi * base + p.xi * p.xi * tail_prime) / (2.0 * heston_d(p, u));
    return p.kappa * p.theta / (p.xi * p.xi) * (-p.rho * p.xi - d_prime);
}

double heston_u_star(const LdpHestonParams& p, double x) {
    const double k = p.kappa;
    const double th = p.theta;
    const double inner = x * x * p.xi * p.xi + 2.0 * x * k * th * p.rho * p.xi + k * k * th * th;
    if (!(inner > 0.0)) {
        throw DomainError("u*(x): inner square root is not positive at x = " + num(x));
    }
    return (p.xi - 2.0 * k * p.rho + (k * th * p.rho + x * p.xi) * p.zeta_hat / std::sqrt(inner)) /
           (2.0 * p.xi * (1.0 - p.rho * p.rho));
}

double heston_lambda_star(const LdpHestonParams& p, double x) {
    const double u = heston_u_star(p, x);
    return u * x - heston_lambda(p, u);
}

RealizedVarLdp make_rv_ldp(double kappa, double theta, double xi, double y0) {
    require_heston_inputs(kappa, theta, xi);
    if (!(y0 >= 0.0) || !std::isfinite(y0)) {
        throw DomainError("y0 must be non-negative");
    }
    return {kappa, theta, xi, y0, kappa * kappa / (2.0 * xi * xi)};
}

double rv_gamma(const RealizedVarLdp& p, double u) {
    if (!(u < p.u_max)) {
        throw DomainError("u = " + num(u) + " must be below u_max = " + num(p.u_max));
    }
    return std::sqrt(p.kappa * p.kappa - 2.0 * p.xi * p.xi * u);
}

double rv_mgf(const RealizedVarLdp& p, double u, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("t must be non-negative");
    }
    const double g = rv_gamma(p, u);
    // Numerator and denominator divided by exp(gamma t).
    const double e = std::exp(-g * t);
    const double denom = g * (1.0 + e) + p.kappa * (1.0 - e);
    if (!(denom > 0.0)) {
        throw DomainError("realised-variance MGF denominator is not positive");
    }
    const double c = 2.0 * p.kappa * p.theta / (p.xi * p.xi);
    return c * (std::log(2.0 * g) + 0.5 * (p.kappa - g) * t - std::log(denom)) +
           2.0 * u * p.y0 * (1.0 - e) / denom;
}

double rv_mgf_derivative(const RealizedVarLdp& p, double u, double t) {
    const double g = rv_gamma(p, u);
    const double dg = -p.xi * p.xi / g;
    const double e = std::exp(-g * t);
    const double de = -t * e * dg;
    const double denom = g * (1.0 + e) + p.kappa * (1.0 - e);
    const double ddenom = dg * (1.0 + e) + (g - p.kappa) * de;
    const double c = 2.0 * p.kappa * p.theta / (p.xi * p.xi);
    return c * (dg / g - 0.5 * t * dg - ddenom / denom) + 2.0 * p.y0 * (1.0 - e) / denom +
           2.0 * u * p.y0 * (-de * denom - (1.0 - e) * ddenom) / (denom * denom);
}

double rv_lambda_inf(const RealizedVarLdp& p, double u) {
    return p.kappa * p.theta / (p.xi * p.xi) * (p.kappa - rv_gamma(p, u));
}

double rv_lambda_inf_derivative(const RealizedVarLdp& p, double u) {
    return p.kappa * p.theta / rv_gamma(p, u);
}

double rv_lambda_star(const RealizedVarLdp& p, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("x must be positive (got " + num(x) + ")");
    }
    const double d = x - p.theta;
    return p.kappa * p.kappa * d * d / (2.0 * p.xi * p.xi * x);
}

LegendreResult fenchel_legendre_numeric(const ConvexFunction& fn, double x) {
    if (!fn.value || !fn.derivative) {
        throw DomainError("fenchel_legendre_numeric: value and derivative are required");
    }
    if (!(fn.lo < fn.hi)) {
        throw DomainError("fenchel_legendre_numeric: empty domain");
    }
    auto slope = [&](double u) { return fn.derivative(u) - x; };

    double a = 0.0;
    double b = 0.0;
    if (std::isfinite(fn.lo) && std::isfinite(fn.hi)) {
        const double pad = kBracketShrink * (fn.hi - fn.lo);
        a = fn.lo + pad;
        b = fn.hi - pad;
    } else if (std::isfinite(fn.lo)) {
        a = fn.lo + kBracketShrink * std::max(1.0, std::abs(fn.lo));
        b = a + 1.0;
        for (int i = 0; i < kMaxIterations && slope(b) < 0.0; ++i) {
            b = a + 2.0 * (b - a);
        }
    } else if (std::isfinite(fn.hi)) {
        b = fn.hi - kBracketShrink * std::max(1.0, std::abs(fn.hi));
        a = b - 1.0;
        for (int i = 0; i < kMaxIterations && slope(a) > 0.0; ++i) {
            a = b - 2.0 * (b - a);
        }
    } else {
        a = -1.0;
        b = 1.0;
        for (int i = 0; i < kMaxIterations && (slope(a) > 0.0 || slope(b) < 0.0); ++i) {
            a *= 2.0;
            b *= 2.0;
        }
    }
    double fa = slope(a);
    double fb = slope(b);
    if (fa > 0.0 || fb < 0.0 || !std::isfinite(fa) || !std::isfinite(fb)) {
        throw NumericError("no interior maximizer: the derivative does not reach x = " + num(x) +
                           " inside the domain");
    }
    if (fa == 0.0) {
        return {a * x - fn.value(a), a};
    }
    if (fb == 0.0) {
        return {b * x - fn.value(b), b};
    }

    double u = 0.5 * (a + b);
    for (int i = 0; i < kMaxIterations; ++i) {
        const double fu = slope(u);
        if (fu == 0.0) {
            break;
        }
        (fu < 0.0 ? a : b) = u;
        // Newton with a central-difference second derivative; bisect when it leaves the bracket.
        const double step = 1e-6 * std::max(1e-3, b - a);
        double next = 0.5 * (a + b);
        if (u - step > a && u + step < b) {
            const double curv = (fn.derivative(u + step) - fn.derivative(u - step)) / (2.0 * step);
            if (curv > 0.0) {
                const double candidate = u - fu / curv;
                if (candidate > a && candidate < b) {
                    next = candidate;
                }
            }
        }
        if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u)) || b - a <= 1e-15 * std::max(1.0, std::abs(u))) {
            u = next;
            break;
        }
        u = next;
    }
    return {u * x - fn.value(u), u};
}

ConvexFunction rv_lambda_inf_function(const RealizedVarLdp& p) {
    return {[p](double u) { return rv_lambda_inf(p, u); },
            [p](double u) { return rv_lambda_inf_derivative(p, u); },
            -std::numeric_limits<double>::infinity(), p.u_max};
}

ConvexFunction heston_lambda_function(const LdpHestonParams& p) {
    return {[p](double u) { return heston_lambda(p, u); },
            [p](double u) { return heston_lambda_derivative(p, u); }, p.u_minus, p.u_plus};
}

double curvature(const std::function<double(double)>& fn, double x0) {
    const double h = 1e-4 * std::max(1.0, std::abs(x0));
    auto five_point = [&](double step) {
        return (-fn(x0 + 2.0 * step) + 16.0 * fn(x0 + step) - 30.0 * fn(x0) + 16.0 * fn(x0 - step) -
                fn(x0 - 2.0 * step)) /
               (12.0 * step * step);
    };
    return (16.0 * five_point(0.5 * h) - five_point(h)) / 15.0;
}

}  // namespace mdpvol
