#include "mdpvol/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "mdpvol/acceptance.hpp"
#include "mdpvol/asymptotics.hpp"
#include "mdpvol/errors.hpp"
#include "mdpvol/invariant_measure.hpp"
#include "mdpvol/ldp.hpp"
#include "mdpvol/mc_engine.hpp"
#include "mdpvol/poisson_solver.hpp"
#include "mdpvol/rate_functions.hpp"

namespace mdpvol {
namespace {

std::vector<std::string> present_params(const ParamsConfig& p) {
    std::vector<std::string> keys;
    auto note = [&keys](const char* key, bool set) {
        if (set) {
            keys.emplace_back(key);
        }
    };
    note("q_g", p.q_g.has_value());
    note("h", p.h.has_value());
    note("grid_points", p.grid_points.has_value());
    note("x_min", p.x_min.has_value());
    note("x_max", p.x_max.has_value());
    note("n_x", p.n_x.has_value());
    note("d_variant", p.d_variant.has_value());
    note("target", p.target.has_value());
    note("t", p.t.has_value());
    note("k", p.k.has_value());
    note("x", p.x.has_value());
    note("paths", p.paths.has_value());
    note("steps", p.steps.has_value());
    note("threads", p.threads.has_value());
    note("antithetic", p.antithetic.has_value());
    note("criteria", p.criteria.has_value());
    return keys;
}

void require_compatible(Experiment e, const ExperimentConfig& config) {
    std::vector<std::string> errors;
    if (config.experiment && *config.experiment != e) {
        errors.push_back(std::string("experiment: config is for \"") + to_string(*config.experiment) +
                         "\" but the subcommand is \"" + to_string(e) + "\"");
    }
    const auto allowed = allowed_params(e);
    for (const auto& key : present_params(config.params)) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            errors.push_back("params." + key + ": not used by experiment \"" + to_string(e) + "\"");
        }
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
}

DVariant variant_of(const ParamsConfig& p) {
    return p.d_variant.value_or("as_printed") == "standard" ? DVariant::Standard : DVariant::AsPrinted;
}

std::vector<double> x_grid(const ParamsConfig& p, double lo, double hi, std::int64_t n) {
    const double a = p.x_min.value_or(lo);
    const double b = p.x_max.value_or(hi);
    const auto count = static_cast<std::size_t>(p.n_x.value_or(n));
    if (!(a < b)) {
        throw ConfigError({"params.x_min: must be below x_max"});
    }
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) {
        xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return xs;
}

CevFactor factor_with_override(const ModelSpec& model, const ParamsConfig& p) {
    CevFactor cev = cev_factor(model);
    if (p.q_g) {
        cev.q_g = *p.q_g;
    }
    return cev;
}

InvariantMeasure measure_for(const CevFactor& cev) {
    if (cev.q_g == 0.5) {
        return gamma_invariant(cev.kappa, cev.theta, cev.xi);
    }
    return speed_measure(cev.kappa, cev.theta, cev.xi, cev.q_g);
}

ExperimentOutput run_invariant(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    const CevFactor cev = factor_with_override(model, config.params);
    const InvariantMeasure mu = measure_for(cev);
    const double mean = mu.integrate([](double y) { return y; }).value;
    const double second = mu.integrate([](double y) { return y * y; }).value;
    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Invariant);
    out.table.add({mu.shape(), mu.rate(), mean, second - mean * mean});
    return out;
}

ExperimentOutput run_poisson(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    const CevFactor cev = factor_with_override(model, config.params);
    const InvariantMeasure mu = measure_for(cev);
    const bool use_phi = config.params.h.value_or("y") == "phi";
    const double x0 = model.x0;
    std::function<double(double)> h = [](double y) { return y; };
    if (use_phi) {
        h = [&model, x0](double y) {
            const double s = model.sigma(x0, y);
            return 0.5 * s * s;
        };
    }
    PoissonOptions options;
    options.q_h = use_phi ? 2.0 * model.growth.q_sigma.value_or(0.5) : 1.0;
    options.grid_points = static_cast<std::size_t>(config.params.grid_points.value_or(2048));
    const PoissonSolution sol = solve_poisson_cev(h, mu, cev.kappa, cev.theta, cev.xi, cev.q_g, options);

    // Pointwise residual of f u' + g^2 u''/2 = H - H_bar with u'' from differences of u'.
    const auto& y = sol.y;
    const auto& up = sol.u_prime;
    const std::size_t n = y.size();
    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Poisson);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = i == 0 ? 0 : i - 1;
        const std::size_t r = i + 1 == n ? n - 1 : i + 1;
        const double u2 = (up[r] - up[l]) / (y[r] - y[l]);
        const double g = cev.xi * std::pow(y[i], cev.q_g);
        const double lhs = cev.kappa * (cev.theta - y[i]) * up[i] + 0.5 * g * g * u2;
        out.table.add({y[i], sol.u[i], up[i], std::abs(lhs - (h(y[i]) - sol.h_bar))});
    }
    return out;
}

ExperimentOutput run_rate(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    const ScalingRegime regime = build_regime(config.regime);
    const double zeta = zeta_from_family(regime);
    const InvariantMeasure mu = invariant_measure_for(model);
    const LargeTimeParams lt = large_time_params(model, mu, solve_phi(model, mu), regime.gamma, zeta);
    const ModelSpec share = share_measure_model(model);
    const InvariantMeasure mu_q = invariant_measure_for(share);
    const LargeTimeParams lt_q = large_time_params(share, mu_q, solve_phi(share, mu_q), regime.gamma, zeta);

    std::vector<double> xs;
    if (config.params.x) {
        xs = {*config.params.x};
    } else {
        xs = x_grid(config.params, -0.3, 0.3, 61);
    }
    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Rate);
    for (double x : xs) {
        out.table.add({x, endpoint_rate(lt.q, lt.alpha, x), endpoint_rate(lt_q.q, lt_q.alpha, x), lt.q, lt_q.q,
                       lt.alpha});
    }
    return out;
}

void require_heston(const ModelSpec& model, const char* what) {
    if (model.kind != ModelKind::Heston) {
        throw UnsupportedModelError(std::string(what) + " needs a Heston model");
    }
}

double heston_q(const ModelSpec& model) {
    const InvariantMeasure mu = invariant_measure_for(model);
    return large_time_params(model, mu, solve_phi(model, mu), 1.0, 0.0).q;
}

/// Lambda*(x), or NaN where u*(x) leaves the domain of the chosen d(u).
double lambda_star_or_nan(const LdpHestonParams& p, double x) {
    try {
        return heston_lambda_star(p, x);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

/// Minimum of Lambda* by Brent's method on [center - theta, center + theta].
std::pair<double, double> lambda_star_minimum(const LdpHestonParams& p) {
    const double center = -0.5 * p.theta;
    auto fn = [&p](double x) { return heston_lambda_star(p, x); };
    return boost::math::tools::brent_find_minima(fn, center - p.theta, center + p.theta,
                                                 std::numeric_limits<double>::digits / 2);
}

ExperimentOutput run_ldp(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    require_heston(model, "the ldp experiment");
    const auto& mp = model.params;
    const LdpHestonParams p = make_ldp_params(mp.kappa, mp.theta, mp.xi, model.rho, variant_of(config.params));
    const double q = heston_q(model);
    const double center = -0.5 * mp.theta;
    const double shift = lambda_star_minimum(p).second;
    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Ldp);
    for (double x : x_grid(config.params, center - 0.2, center + 0.2, 81)) {
        const double ls = lambda_star_or_nan(p, x);
        const double mdp = (x - center) * (x - center) / (2.0 * q) + shift;
        out.table.add({x, ls, mdp, ls - mdp});
    }
    return out;
}

ExperimentOutput run_compare(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    require_heston(model, "the compare experiment");
    const auto& mp = model.params;
    const DVariant variant = variant_of(config.params);
    const LdpHestonParams p = make_ldp_params(mp.kappa, mp.theta, mp.xi, model.rho, variant);
    const double q = heston_q(model);
    const double center = -0.5 * mp.theta;
    auto lambda_star = [&p](double x) { return heston_lambda_star(p, x); };
    const auto found = lambda_star_minimum(p);
    const double min_value = found.second;
    const double curv = curvature(lambda_star, center);

    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Compare);
    double cubic_ratio = 0.0;
    long long undefined = 0;
    for (double x : x_grid(config.params, center - 0.2, center + 0.2, 81)) {
        const double ldp = lambda_star_or_nan(p, x);
        const double mdp = (x - center) * (x - center) / (2.0 * q) + min_value;
        const double diff = std::abs(ldp - mdp);
        out.table.add({x, ldp, mdp, diff});
        const double dist = std::abs(x - center);
        if (std::isnan(diff)) {
            ++undefined;
        } else if (dist > 1e-6 && dist <= 0.05) {
            cubic_ratio = std::max(cubic_ratio, diff / (dist * dist * dist));
        }
    }
    JsonSummary s;
    s["d_variant"] = to_string(variant);
    s["kappa"] = mp.kappa;
    s["theta"] = mp.theta;
    s["xi"] = mp.xi;
    s["rho"] = model.rho;
    s["q"] = q;
    s["center"] = center;
    s["lambda_star_min_location"] = found.first;
    s["lambda_star_min_value"] = min_value;
    s["curvature_at_center"] = curv;
    s["curvature_residual"] = std::abs(curv * q - 1.0);
    s["max_cubic_ratio_within_0_05"] = json_number(cubic_ratio);
    s["undefined_points"] = undefined;
    out.summary = s;
    return out;
}

ExperimentOutput run_mc(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    const ScalingRegime regime = build_regime(config.regime);
    const ParamsConfig& p = config.params;
    const std::string target = p.target.value_or("smalltime_tail");
    SimConfig sim;
    sim.n_paths = static_cast<std::size_t>(p.paths.value_or(100000));
    sim.n_steps = static_cast<std::size_t>(p.steps.value_or(100));
    sim.threads = static_cast<unsigned>(p.threads.value_or(1));
    sim.antithetic = p.antithetic.value_or(false);
    sim.seed = derive_seed(config.seed.value_or(kDefaultSeed), "mc/" + target);

    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Mc);
    if (target == "rv_tail") {
        require_heston(model, "the realised-variance tail");
        const auto est = estimate_rv_tail(model, p.t.value_or(100.0), p.x.value_or(0.05), regime.beta, sim);
        out.table.add({est.p_hat, est.ci_halfwidth, est.normalized_log, est.analytic_target, est.gap()});
    } else if (target == "call") {
        const auto est = estimate_call_smalltime(model, p.t.value_or(0.01), p.k.value_or(0.2), regime.beta, sim);
        out.table.add({est.price, est.ci_halfwidth, est.normalized_log, est.analytic_target,
                       est.normalized_log - est.analytic_target});
    } else {
        const auto est = estimate_smalltime_tail(model, p.t.value_or(0.01), p.k.value_or(0.2), regime.beta, sim);
        out.table.add({est.p_hat, est.ci_halfwidth, est.normalized_log, est.analytic_target, est.gap()});
    }
    return out;
}

ExperimentOutput run_asymptotics(const ExperimentConfig& config) {
    const ModelSpec model = build_model(config.model);
    const ScalingRegime regime = build_regime(config.regime);
    const double k = config.params.k.value_or(0.2);
    const double x = std::abs(config.params.x.value_or(0.1));
    const double t = config.params.t.value_or(100.0);
    ExperimentOutput out;
    out.table.header = experiment_header(Experiment::Asymptotics);
    auto row = [&out](QuoteRegime r, double arg, double value, const std::string& speed) {
        out.table.add({std::string(to_string(r)), arg, value, speed});
    };
    const auto call = smalltime_call_quote(model, k);
    row(call.regime, k, call.exponent_value, call.speed);
    if (has_cev_factor(model)) {
        const double q = heston_q(model);
        row(QuoteRegime::LargeTimePut, -x, largetime_put_quote(q, -x, regime.beta, t).correction, "t^(1/2-beta)");
        row(QuoteRegime::LargeTimeCall, x, largetime_call_exponent(model, x), "t^(2beta)");
    }
    if (model.kind == ModelKind::Heston) {
        const auto& mp = model.params;
        const auto rv = rv_option_quotes(mp.kappa, mp.theta, mp.xi, x);
        row(QuoteRegime::RvOptionLDP, x, rv.ldp_quote, "t");
        row(QuoteRegime::RvOptionMDP, x, rv.mdp_quote, "t^(2beta)");
    }
    if (model.kind == ModelKind::Heston || model.kind == ModelKind::SteinStein ||
        model.kind == ModelKind::PowerFamily) {
        row(QuoteRegime::TailProb, model.x0 + x, tail_probability_exponent(model, model.x0 + x, t), "1");
    }
    return out;
}

}  // namespace

std::vector<std::string> experiment_header(Experiment e) {
    switch (e) {
        case Experiment::Invariant: return {"shape", "rate", "mean", "variance"};
        case Experiment::Poisson: return {"y", "u", "u_prime", "residual"};
        case Experiment::Rate: return {"x", "J", "J_Q", "q", "q_Q", "alpha"};
        case Experiment::Ldp: return {"x", "lambda_star", "mdp_quadratic", "difference"};
        case Experiment::Mc: return {"p_hat", "ci", "normalized_log", "target", "gap"};
        case Experiment::Asymptotics: return {"regime", "x_or_k", "exponent", "speed"};
        case Experiment::Compare: return {"x", "ldp_rate", "mdp_quadratic_shifted", "abs_diff"};
        case Experiment::Acceptance: return {"id", "name", "passed", "runtime_s", "detail"};
    }
    return {};
}

ExperimentOutput compute_experiment(Experiment e, const ExperimentConfig& config) {
    require_compatible(e, config);
    switch (e) {
        case Experiment::Invariant: return run_invariant(config);
        case Experiment::Poisson: return run_poisson(config);
        case Experiment::Rate: return run_rate(config);
        case Experiment::Ldp: return run_ldp(config);
        case Experiment::Mc: return run_mc(config);
        case Experiment::Asymptotics: return run_asymptotics(config);
        case Experiment::Compare: return run_compare(config);
        case Experiment::Acceptance: break;
    }
    throw DomainError("compute_experiment does not handle the acceptance suite; use run_experiment");
}

RunResult run_experiment(Experiment e, const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    const std::string prefix = config.output.value_or(to_string(e));
    RunResult result;
    if (e == Experiment::Acceptance) {
        require_compatible(e, config);
        AcceptanceOptions options;
        options.seed = config.seed.value_or(kDefaultSeed);
        if (config.params.criteria) {
            options.criteria.assign(config.params.criteria->begin(), config.params.criteria->end());
        }
        const AcceptanceReport report = run_acceptance(options);
        result.passed = report.all_passed();
        result.files = {out_dir / (prefix + ".json"), out_dir / (prefix + ".txt")};
        write_atomic(result.files[0], to_json_text(acceptance_json(report)));
        write_atomic(result.files[1], acceptance_text(report));
        return result;
    }
    const ExperimentOutput out = compute_experiment(e, config);
    result.files.push_back(out_dir / (prefix + ".csv"));
    write_atomic(result.files.back(), to_csv(out.table));
    if (out.summary) {
        result.files.push_back(out_dir / (prefix + ".json"));
        write_atomic(result.files.back(), to_json_text(*out.summary));
    }
    return result;
}

}  // namespace mdpvol
