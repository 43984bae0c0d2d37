#include "mdpvol/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdpvol/errors.hpp"

namespace mdpvol {
namespace {

void require(bool condition, const std::string& what) {
    if (!condition) {
        throw DomainError(what);
    }
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

void require_rho(double rho) {
    require_finite(rho, "rho");
    require(std::abs(rho) <= 1.0, "rho must satisfy |rho| <= 1");
}

bool is_integer(double v) { return std::floor(v) == v; }

// y^nu on the coefficient domain: negative y is clamped to 0 unless the
// exponent is an integer.
double factor_power(double y, double nu) {
    if (y < 0.0 && !is_integer(nu)) {
        y = 0.0;
    }
    if (nu == 0.0) {
        return 1.0;
    }
    return std::pow(y, nu);
}

std::string format_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Heston: return "heston";
        case ModelKind::SteinStein: return "stein_stein";
        case ModelKind::LSV: return "lsv";
        case ModelKind::PowerFamily: return "power_family";
        case ModelKind::ConstantSigma: return "constant_sigma";
        case ModelKind::Custom: return "custom";
    }
    return "unknown";
}

ModelSpec make_heston(double kappa, double theta, double xi, double rho, double x0, double y0) {
    require_finite(kappa, "kappa");
    require_finite(theta, "theta");
    require_finite(xi, "xi");
    require_finite(x0, "x0");
    require_finite(y0, "y0");
    require(kappa > 0.0, "kappa must be positive (got " + format_number(kappa) + ")");
    require(theta > 0.0, "theta must be positive (got " + format_number(theta) + ")");
    require(xi != 0.0, "xi must be non-zero");
    require_rho(rho);
    require(y0 > 0.0, "y0 must be positive (got " + format_number(y0) + ")");

    ModelSpec m;
    m.kind = ModelKind::Heston;
    m.sigma = [](double, double y) { return std::sqrt(std::max(y, 0.0)); };
    m.f = [kappa, theta](double, double y) { return kappa * (theta - std::max(y, 0.0)); };
    m.g = [xi](double, double y) { return xi * std::sqrt(std::max(y, 0.0)); };
    m.rho = rho;
    m.x0 = x0;
    m.y0 = y0;
    m.growth.nu_sigma = 0.5;
    m.growth.nu_g = 0.5;
    m.growth.q_sigma = 0.5;
    m.growth.q_g = 0.5;
    m.growth.lipschitz_tau = 0.0;
    m.growth.mean_reversion = kappa;
    m.params.kappa = kappa;
    m.params.theta = theta;
    m.params.xi = xi;
    m.params.a = kappa * theta;
    m.params.b = -kappa;
    m.params.c_g = xi;
    m.params.c_sigma = 1.0;
    m.params.nu_g = 0.5;
    m.params.nu_sigma = 0.5;
    m.clamps_factor = true;
    return m;
}

ModelSpec make_stein_stein(double a, double b, double c, double rho, double x0, double y0) {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(c, "c");
    require_finite(x0, "x0");
    require_finite(y0, "y0");
    require(c != 0.0, "c must be non-zero");
    require_rho(rho);

    ModelSpec m;
    m.kind = ModelKind::SteinStein;
    m.sigma = [](double, double y) { return y; };
    m.f = [a, b](double, double y) { return a + b * y; };
    m.g = [c](double, double) { return c; };
    m.rho = rho;
    m.x0 = x0;
    m.y0 = y0;
    m.growth.nu_sigma = 1.0;
    m.growth.nu_g = 0.0;
    m.growth.q_sigma = 1.0;
    m.growth.q_g = 0.0;
    m.growth.bounded_g = true;
    m.growth.lipschitz_tau = 0.0;
    if (b < 0.0) {
        m.growth.mean_reversion = -b;
    }
    m.params.a = a;
    m.params.b = b;
    m.params.c_g = c;
    m.params.c_sigma = 1.0;
    m.params.nu_g = 0.0;
    m.params.nu_sigma = 1.0;
    return m;
}

ModelSpec make_power_family(double a, double b, double c_g, double c_sigma, double nu_g,
                            double nu_sigma, double rho, double x0, double y0) {
    for (auto [v, name] : {std::pair{a, "a"}, {b, "b"}, {c_g, "c_g"}, {c_sigma, "c_sigma"},
                           {nu_g, "nu_g"}, {nu_sigma, "nu_sigma"}, {x0, "x0"}, {y0, "y0"}}) {
        require_finite(v, name);
    }
    require(c_sigma != 0.0, "c_sigma must be non-zero");
    require(nu_sigma > 0.0 && nu_sigma <= 1.0, "nu_sigma must lie in (0, 1]");
    require(nu_g >= 0.0, "nu_g must be non-negative");
    require(nu_g <= 1.0 - nu_sigma,
            "nu_g must not exceed 1 - nu_sigma (got nu_g=" + format_number(nu_g) +
                ", nu_sigma=" + format_number(nu_sigma) + ")");
    require_rho(rho);

    ModelSpec m;
    m.kind = ModelKind::PowerFamily;
    m.clamps_factor = !is_integer(nu_g) || !is_integer(nu_sigma);
    const bool clamp = m.clamps_factor;
    m.sigma = [c_sigma, nu_sigma](double, double y) { return c_sigma * factor_power(y, nu_sigma); };
    m.f = [a, b, clamp](double, double y) { return a + b * (clamp ? std::max(y, 0.0) : y); };
    m.g = [c_g, nu_g](double, double y) { return c_g * factor_power(y, nu_g); };
    m.rho = rho;
    m.x0 = x0;
    m.y0 = y0;
    m.growth.nu_sigma = nu_sigma;
    m.growth.nu_g = nu_g;
    m.growth.q_sigma = nu_sigma;
    m.growth.q_g = nu_g;
    m.growth.bounded_g = (nu_g == 0.0);
    m.growth.lipschitz_tau = 0.0;
    if (b < 0.0) {
        m.growth.mean_reversion = -b;
    }
    m.params.a = a;
    m.params.b = b;
    m.params.c_g = c_g;
    m.params.c_sigma = c_sigma;
    m.params.nu_g = nu_g;
    m.params.nu_sigma = nu_sigma;
    if (b < 0.0) {
        m.params.kappa = -b;
        m.params.theta = a / -b;
        m.params.xi = c_g;
    }
    return m;
}

ModelSpec make_constant_sigma(double sigma, double rho, double x0, double y0) {
    require_finite(sigma, "sigma");
    require_finite(x0, "x0");
    require_finite(y0, "y0");
    require(sigma != 0.0, "sigma must be non-zero");
    require_rho(rho);

    ModelSpec m;
    m.kind = ModelKind::ConstantSigma;
    m.sigma = [sigma](double, double) { return sigma; };
    m.f = [](double, double y) { return -y; };
    m.g = [](double, double) { return 1.0; };
    m.rho = rho;
    m.x0 = x0;
    m.y0 = y0;
    m.growth.q_sigma = 0.0;
    m.growth.q_g = 0.0;
    m.growth.bounded_g = true;
    m.growth.lipschitz_tau = 0.0;
    m.growth.mean_reversion = 1.0;
    m.params.sigma = sigma;
    m.params.kappa = 1.0;
    return m;
}

ModelSpec make_lsv(std::function<double(double)> local_vol, std::function<double(double)> vol_factor,
                   Coefficient f, Coefficient g, double rho, double x0, double y0,
                   GrowthExponents growth) {
    require(static_cast<bool>(local_vol) && static_cast<bool>(vol_factor) &&
                static_cast<bool>(f) && static_cast<bool>(g),
            "lsv: all coefficient handles must be set");
    require(growth.q_sigma.has_value() && growth.q_g.has_value(),
            "lsv: growth exponents q_sigma and q_g must be declared");
    require_rho(rho);
    require_finite(x0, "x0");
    require_finite(y0, "y0");

    ModelSpec m;
    m.kind = ModelKind::LSV;
    m.sigma = [local_vol, vol_factor](double x, double y) { return local_vol(x) * vol_factor(y); };
    m.f = std::move(f);
    m.g = std::move(g);
    m.rho = rho;
    m.x0 = x0;
    m.y0 = y0;
    m.growth = growth;
    m.factor_only = false;
    m.local_vol = std::move(local_vol);
    m.vol_factor = std::move(vol_factor);
    return m;
}

ModelSpec make_custom(Coefficient sigma, Coefficient f, Coefficient g, double rho, double x0,
                      double y0, GrowthExponents growth, bool factor_only) {
    require(static_cast<bool>(sigma) && static_cast<bool>(f) && static_cast<bool>(g),
            "custom: all coefficient handles must be set");
    require(growth.q_sigma.has_value() && growth.q_g.has_value(),
            "custom: growth exponents q_sigma and q_g must be declared");
    require_rho(rho);
    require_finite(x0, "x0");
    require_finite(y0, "y0");

    ModelSpec m;
    m.kind = ModelKind::Custom;
    m.sigma = std::move(sigma);
    m.f = std::move(f);
    m.g = std::move(g);
    m.rho = rho;
    m.x0 = x0;
    m.y0 = y0;
    m.growth = growth;
    m.factor_only = factor_only;
    return m;
}

CoefficientValues eval_coeffs(const ModelSpec& model, double x, double y) {
    return {model.sigma(x, y), model.f(x, y), model.g(x, y)};
}

double initial_volatility(const ModelSpec& model) {
    if (model.kind == ModelKind::LSV) {
        return model.local_vol(model.x0) * model.vol_factor(model.y0);
    }
    return model.sigma(model.x0, model.y0);
}

bool has_cev_factor(const ModelSpec& model) {
    if (!model.factor_only) {
        return false;
    }
    if (model.kind == ModelKind::Heston) {
        return true;
    }
    if (model.kind == ModelKind::PowerFamily) {
        const auto& p = model.params;
        return p.b < 0.0 && p.a > 0.0 && p.c_g != 0.0 && p.nu_g >= 0.5 && p.nu_g < 1.0;
    }
    return false;
}

CevFactor cev_factor(const ModelSpec& model) {
    if (!has_cev_factor(model)) {
        throw UnsupportedModelError(
            "model '" + to_string(model.kind) +
            "' has no CEV factor kappa(theta - y) dt + xi y^q dZ with q in [1/2, 1)");
    }
    const auto& p = model.params;
    return {p.kappa, p.theta, p.xi, p.nu_g};
}

const AssumptionCheck* AssumptionReport::find(const std::string& id) const {
    auto it = std::find_if(checks.begin(), checks.end(),
                           [&](const AssumptionCheck& c) { return c.id == id; });
    return it == checks.end() ? nullptr : &*it;
}

bool AssumptionReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

double cev_scaling_exponent(double q_g, double q_h, double beta) {
    return 0.5 - beta * (q_g + q_h - 1.0) / (1.0 - q_g);
}

AssumptionReport check_assumptions(const ModelSpec& model, const AssumptionInputs& inputs) {
    AssumptionReport report;
    const auto& gr = model.growth;
    auto add = [&](std::string id, bool passed, std::string detail) {
        report.checks.push_back({std::move(id), passed, std::move(detail)});
    };

    if (gr.q_sigma && gr.q_g) {
        const double sum = *gr.q_sigma + *gr.q_g;
        add("sigma_g_growth", sum <= 1.0, "q_sigma + q_g = " + format_number(sum) + " <= 1");
    }
    if (gr.lipschitz_tau && gr.mean_reversion) {
        add("drift_lipschitz", *gr.lipschitz_tau < *gr.mean_reversion,
            "L_tau = " + format_number(*gr.lipschitz_tau) + " < kappa = " +
                format_number(*gr.mean_reversion));
    }
    if (inputs.q_h && gr.q_sigma && gr.q_g) {
        const double qh = *inputs.q_h;
        const double worst = std::max(*gr.q_sigma + qh, *gr.q_g + qh);
        add("generic_growth", worst < 1.0,
            "max(q_sigma + q_H, q_g + q_H) = " + format_number(worst) + " < 1");
        if (has_cev_factor(model)) {
            const double qg_qh = *gr.q_g + qh;
            add("cev_growth", *gr.q_sigma < 1.0 && qg_qh < 2.0,
                "q_sigma = " + format_number(*gr.q_sigma) + " < 1 and q_g + q_H = " +
                    format_number(qg_qh) + " < 2");
            if (inputs.beta) {
                // Multiplying the exponent by (1 - q_g) > 0 keeps the comparison exact
                // for the q_H = 1 boundary q_g = 1 / (2 beta + 1).
                const double lhs = 0.5 * (1.0 - *gr.q_g);
                const double rhs = *inputs.beta * (qg_qh - 1.0);
                add("cev_scaling", lhs > rhs,
                    "exponent 1/2 - beta (q_g + q_H - 1)/(1 - q_g) = " +
                        format_number(cev_scaling_exponent(*gr.q_g, qh, *inputs.beta)) + " > 0");
            }
        }
    }
    if (gr.nu_sigma && gr.nu_g) {
        const double ns = *gr.nu_sigma;
        const double ng = *gr.nu_g;
        add("power_form", ns > 0.0 && ns <= 1.0 && ng >= 0.0 && ng <= 1.0 - ns,
            "nu_sigma = " + format_number(ns) + " in (0, 1], nu_g = " + format_number(ng) +
                " in [0, 1 - nu_sigma]");
    }
    add("moment_condition", model.moment_condition,
        model.moment_condition ? "declared" : "not declared");
    return report;
}

}  // namespace mdpvol
