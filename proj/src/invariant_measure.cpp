#include "mdpvol/invariant_measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "mdpvol/errors.hpp"
#include "mdpvol/quadrature.hpp"

namespace mdpvol {
namespace {

constexpr std::size_t kStartNodes = 16;
constexpr std::size_t kMaxNodes = 512;
constexpr double kMomentTolerance = 1e-13;
constexpr double kLogWindow = 40.0;  // density window below the peak of y m(y), in nats
constexpr int kTableMinExp = -120;
constexpr int kTableMaxExp = 80;
constexpr std::size_t kTableNodes = 20;

void check_cev_inputs(double kappa, double theta, double xi) {
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

double lower_cut(double theta) { return std::max(1e-10, 1e-6 * theta); }

}  // namespace

/// Cumulative values of int_1^{2^k} 2 kappa (theta - z) / (xi^2 z^2q) dz on the dyadic breaks.
struct InvariantMeasure::SpeedTable {
    double kappa;
    double theta;
    double xi2;
    double q;
    std::vector<double> cumulative;  // index k - kTableMinExp

    double integrand(double z) const {
        return 2.0 * kappa * (theta - z) / (xi2 * std::pow(z, 2.0 * q));
    }

    double segment(double a, double b) const {
        return quadrature::integrate([this](double z) { return integrand(z); }, a, b, kTableNodes);
    }

    void build() {
        const int count = kTableMaxExp - kTableMinExp + 1;
        cumulative.assign(static_cast<std::size_t>(count), 0.0);
        const int anchor = -kTableMinExp;
        for (int i = anchor + 1; i < count; ++i) {
            const double a = std::ldexp(1.0, i - 1 + kTableMinExp);
            cumulative[static_cast<std::size_t>(i)] =
                cumulative[static_cast<std::size_t>(i - 1)] + segment(a, 2.0 * a);
        }
        for (int i = anchor - 1; i >= 0; --i) {
            const double a = std::ldexp(1.0, i + kTableMinExp);
            cumulative[static_cast<std::size_t>(i)] =
                cumulative[static_cast<std::size_t>(i + 1)] - segment(a, 2.0 * a);
        }
    }

    double exponent(double y) const {
        int e = 0;
        std::frexp(y, &e);  // y in [2^(e-1), 2^e)
        int k = std::clamp(e - 1, kTableMinExp, kTableMaxExp);
        const double base = std::ldexp(1.0, k);
        const double start = cumulative[static_cast<std::size_t>(k - kTableMinExp)];
        if (y == base) {
            return start;
        }
        return y > base ? start + segment(base, y) : start - segment(y, base);
    }
};

double QuadratureRule::apply(const std::function<double(double)>& fn) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * fn(nodes[i]);
    }
    return sum;
}

double InvariantMeasure::log_unnormalized(double y) const {
    if (kind_ == MeasureKind::GammaClosedForm) {
        return (shape_ - 1.0) * std::log(y) - rate_ * y - log_offset_;
    }
    return -std::log(xi_ * xi_) - 2.0 * q_g_ * std::log(y) + table_->exponent(y) - log_offset_;
}

double InvariantMeasure::log_density(double y) const {
    if (!(y > 0.0)) {
        return -std::numeric_limits<double>::infinity();
    }
    return log_unnormalized(y) - log_norm_;
}

double InvariantMeasure::density(double y) const { return std::exp(log_density(y)); }

double InvariantMeasure::log_density_slope(double y) const {
    return 2.0 * kappa_ * (theta_ - y) / (xi_ * xi_ * std::pow(y, 2.0 * q_g_)) - 2.0 * q_g_ / y;
}

void InvariantMeasure::build_rules(const std::vector<double>& breaks) {
    const bool singular_start = (q_g_ == 0.5);
    auto assemble = [&](std::size_t n) {
        QuadratureRule rule;
        const auto& gl = quadrature::gauss_legendre(n);
        if (singular_start) {
            // y = lo s^(1/shape) turns the y^(shape-1) factor on (0, lo] into a constant.
            const double a = 2.0 * kappa_ * theta_ / (xi_ * xi_);
            const double r = 2.0 * kappa_ / (xi_ * xi_);
            const double log_scale = std::log(lo_ / a) + log_unnormalized(lo_);
            for (std::size_t j = 0; j < n; ++j) {
                const double s = 0.5 * (gl.nodes[j] + 1.0);
                const double y = lo_ * std::pow(s, 1.0 / a);
                rule.nodes.push_back(y);
                rule.weights.push_back(0.5 * gl.weights[j] * std::exp(log_scale - r * (y - lo_)));
            }
        }
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double a = breaks[p];
            const double b = breaks[p + 1];
            const double mid = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            for (std::size_t j = 0; j < n; ++j) {
                const double y = mid + half * gl.nodes[j];
                rule.nodes.push_back(y);
                rule.weights.push_back(half * gl.weights[j] * std::exp(log_unnormalized(y)));
            }
        }
        return rule;
    };
    auto moments = [](const QuadratureRule& rule) {
        std::array<double, 3> m{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double y = rule.nodes[i];
            m[0] += rule.weights[i];
            m[1] += rule.weights[i] * y;
            m[2] += rule.weights[i] * y * y;
        }
        return m;
    };

    std::size_t n = kStartNodes;
    QuadratureRule coarse = assemble(n);
    auto coarse_m = moments(coarse);
    for (;;) {
        QuadratureRule fine = assemble(2 * n);
        auto fine_m = moments(fine);
        bool converged = true;
        for (std::size_t k = 0; k < 3; ++k) {
            const double ref_c = coarse_m[k] / coarse_m[0];
            const double ref_f = fine_m[k] / fine_m[0];
            if (std::abs(ref_f - ref_c) > kMomentTolerance * std::abs(ref_f)) {
                converged = false;
            }
        }
        if (converged) {
            const double total = fine_m[0];
            if (kind_ == MeasureKind::SpeedMeasureNumeric) {
                log_norm_ = std::log(total);
            }
            // Both rules are scaled to unit mass; for the Gamma form this spreads the
            // 1e-12 mass above hi over the domain.
            for (auto& w : fine.weights) {
                w /= total;
            }
            for (auto& w : coarse.weights) {
                w /= coarse_m[0];
            }
            fine_ = std::move(fine);
            coarse_ = std::move(coarse);
            if (singular_start) {
                const std::size_t m = 2 * n;
                near_zero_.nodes.assign(fine_.nodes.begin(), fine_.nodes.begin() + static_cast<long>(m));
                near_zero_.weights.assign(fine_.weights.begin(),
                                          fine_.weights.begin() + static_cast<long>(m));
            }
            return;
        }
        if (2 * n >= kMaxNodes) {
            throw NumericError("invariant measure quadrature did not converge with " +
                               std::to_string(kMaxNodes) + " nodes per panel");
        }
        n *= 2;
        coarse = std::move(fine);
        coarse_m = fine_m;
    }
}

namespace {

/// Panel breaks: ratio-4 geometric panels over [lo, hi], refined around the
/// mode of y m(y) to a spacing of half its log-width, plus extra breaks.
std::vector<double> panel_breaks(double lo, double hi, double mode, double log_width,
                                 const std::vector<double>& extra) {
    std::vector<double> breaks;
    const double coarse_step = std::log(4.0);
    const double span = std::log(hi / lo);
    const auto coarse_count = static_cast<std::size_t>(std::ceil(span / coarse_step));
    for (std::size_t i = 0; i <= coarse_count; ++i) {
        breaks.push_back(lo * std::exp(span * static_cast<double>(i) / static_cast<double>(coarse_count)));
    }
    const double fine_step = 0.5 * log_width;
    if (fine_step < coarse_step) {
        const double a = std::max(lo, mode * std::exp(-12.0 * log_width));
        const double b = std::min(hi, mode * std::exp(12.0 * log_width));
        const auto count = static_cast<std::size_t>(std::ceil(std::log(b / a) / fine_step));
        for (std::size_t i = 0; i <= count; ++i) {
            breaks.push_back(a * std::exp(std::log(b / a) * static_cast<double>(i) / static_cast<double>(count)));
        }
    }
    for (double e : extra) {
        if (e > lo && e < hi) {
            breaks.push_back(e);
        }
    }
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> unique;
    for (double b : breaks) {
        if (b < lo || b > hi) {
            continue;
        }
        if (unique.empty() || b > unique.back() * (1.0 + 1e-9)) {
            unique.push_back(b);
        } else if (b == hi) {
            unique.back() = hi;
        }
    }
    return unique;
}

}  // namespace

InvariantMeasure gamma_invariant(double kappa, double theta, double xi) {
    check_cev_inputs(kappa, theta, xi);
    InvariantMeasure m;
    m.kind_ = MeasureKind::GammaClosedForm;
    m.kappa_ = kappa;
    m.theta_ = theta;
    m.xi_ = xi;
    m.q_g_ = 0.5;
    m.shape_ = 2.0 * kappa * theta / (xi * xi);
    m.rate_ = 2.0 * kappa / (xi * xi);
    m.log_offset_ = std::lgamma(m.shape_) - m.shape_ * std::log(m.rate_);
    m.lo_ = lower_cut(theta);
    m.tail_mass_ = 1e-12;
    m.hi_ = boost::math::gamma_q_inv(m.shape_, m.tail_mass_) / m.rate_;
    std::vector<double> quantiles;
    for (double p : {1e-9, 1e-6, 1e-3, 0.05, 0.25, 0.5, 0.75, 0.95, 1 - 1e-3, 1 - 1e-6, 1 - 1e-9}) {
        quantiles.push_back(boost::math::gamma_p_inv(m.shape_, p) / m.rate_);
    }
    m.build_rules(panel_breaks(m.lo_, m.hi_, theta, 1.0 / std::sqrt(m.shape_), quantiles));
    return m;
}

InvariantMeasure speed_measure(double kappa, double theta, double xi, double q_g) {
    check_cev_inputs(kappa, theta, xi);
    if (!(q_g >= 0.5 && q_g < 1.0)) {
        throw DomainError("q_g must lie in [1/2, 1) (got " + std::to_string(q_g) + ")");
    }
    InvariantMeasure m;
    m.kind_ = MeasureKind::SpeedMeasureNumeric;
    m.kappa_ = kappa;
    m.theta_ = theta;
    m.xi_ = xi;
    m.q_g_ = q_g;
    if (q_g == 0.5) {
        m.shape_ = 2.0 * kappa * theta / (xi * xi);
        m.rate_ = 2.0 * kappa / (xi * xi);
    } else {
        m.shape_ = std::numeric_limits<double>::quiet_NaN();
        m.rate_ = std::numeric_limits<double>::quiet_NaN();
    }
    auto table = std::make_shared<InvariantMeasure::SpeedTable>();
    table->kappa = kappa;
    table->theta = theta;
    table->xi2 = xi * xi;
    table->q = q_g;
    table->build();
    m.table_ = table;

    // y m(y) is unimodal with its peak where y l'(y) + 1 = 0, at or below theta.
    auto score = [&](double y) { return y * m.log_density_slope(y) + 1.0; };
    double a = theta * 1e-12;
    double b = theta;
    for (int i = 0; i < 200 && b / a > 1.0 + 1e-12; ++i) {
        const double mid = std::sqrt(a * b);
        (score(mid) > 0.0 ? a : b) = mid;
    }
    const double mode = std::sqrt(a * b);
    m.log_offset_ = m.log_unnormalized(mode);
    const double peak = m.log_unnormalized(mode) + std::log(mode);
    auto in_window = [&](double y) { return m.log_unnormalized(y) + std::log(y) >= peak - kLogWindow; };

    double hi = mode;
    while (in_window(hi)) {
        hi *= 2.0;
        if (hi > std::ldexp(1.0, kTableMaxExp)) {
            throw NumericError("speed measure: normalizing integral does not converge on the table range");
        }
    }
    m.hi_ = hi;
    if (q_g == 0.5) {
        m.lo_ = lower_cut(theta);
    } else {
        double lo = mode;
        while (in_window(lo)) {
            lo *= 0.5;
            if (lo < std::ldexp(1.0, kTableMinExp)) {
                throw NumericError("speed measure: density does not vanish near zero on the table range");
            }
        }
        m.lo_ = lo;
    }

    // Log-width of y m(y) at its peak from the second derivative in s = log y.
    const double h = 1e-4;
    const double curv = -(m.log_unnormalized(mode * std::exp(h)) + m.log_unnormalized(mode * std::exp(-h)) -
                          2.0 * m.log_unnormalized(mode)) / (h * h);
    const double width = curv > 0.0 ? 1.0 / std::sqrt(curv) : 1.0;
    m.build_rules(panel_breaks(m.lo_, m.hi_, mode, width, {1.0}));

    const double slope = m.log_density_slope(m.hi_);
    m.tail_mass_ = slope < 0.0 ? m.density(m.hi_) / -slope : 1.0;
    return m;
}

Integral InvariantMeasure::integrate(const std::function<double(double)>& fn, double growth_budget) const {
    const double at_hi = std::abs(fn(hi_));
    if (!std::isfinite(at_hi) || at_hi * tail_mass_ > growth_budget) {
        throw NumericError("integrand grows too fast: |phi(hi)| * tail mass = " +
                           std::to_string(at_hi * tail_mass_) + " exceeds the budget");
    }
    const double fine = fine_.apply(fn);
    const double coarse = coarse_.apply(fn);
    if (!std::isfinite(fine)) {
        throw NumericError("integrand is not finite on the quadrature nodes");
    }
    return {fine, std::abs(fine - coarse)};
}

InvariantMeasure invariant_measure_for(const ModelSpec& model) {
    const CevFactor cev = cev_factor(model);
    if (model.kind == ModelKind::Heston) {
        return gamma_invariant(cev.kappa, cev.theta, cev.xi);
    }
    return speed_measure(cev.kappa, cev.theta, cev.xi, cev.q_g);
}

std::function<double(double)> averaged_drift(const ModelSpec& model, const InvariantMeasure& measure,
                                             double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must lie in (0, inf)");
    }
    auto at = [model, &measure, gamma](double x) {
        const double s2 = measure
                              .integrate([&](double y) {
                                  const double s = model.sigma(x, y);
                                  return s * s;
                              })
                              .value;
        return -0.5 * gamma * s2;
    };
    if (model.factor_only) {
        const double value = at(model.x0);
        return [value](double) { return value; };
    }
    return [at](double x) { return at(x); };
}

DiscretePath averaged_state_path(const ModelSpec& model, const InvariantMeasure& measure, double gamma,
                                 double horizon, std::size_t n_steps) {
    if (n_steps < 1) {
        throw DomainError("n_steps must be at least 1");
    }
    if (!(horizon > 0.0)) {
        throw DomainError("horizon must be positive");
    }
    const auto drift = averaged_drift(model, measure, gamma);
    DiscretePath path{horizon, std::vector<double>(n_steps + 1)};
    if (model.factor_only) {
        const double lambda = drift(model.x0);
        for (std::size_t i = 0; i <= n_steps; ++i) {
            path.values[i] = model.x0 + lambda * path.time(i);
        }
        return path;
    }
    const double dt = path.step();
    double x = model.x0;
    path.values[0] = x;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double k1 = drift(x);
        const double k2 = drift(x + 0.5 * dt * k1);
        const double k3 = drift(x + 0.5 * dt * k2);
        const double k4 = drift(x + dt * k3);
        x += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        path.values[i] = x;
    }
    return path;
}

double generator_expectation(const InvariantMeasure& measure, const std::function<double(double)>& d1,
                             const std::function<double(double)>& d2) {
    const double kappa = measure.kappa();
    const double theta = measure.theta();
    const double xi2 = measure.xi() * measure.xi();
    const double q = measure.q_g();
    return measure
        .integrate([&](double y) {
            return kappa * (theta - y) * d1(y) + 0.5 * xi2 * std::pow(y, 2.0 * q) * d2(y);
        })
        .value;
}

}  // namespace mdpvol
