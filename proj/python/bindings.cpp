#include <algorithm>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mdpvol/acceptance.hpp"
#include "mdpvol/asymptotics.hpp"
#include "mdpvol/config.hpp"
#include "mdpvol/errors.hpp"
#include "mdpvol/experiments.hpp"
#include "mdpvol/invariant_measure.hpp"
#include "mdpvol/ldp.hpp"
#include "mdpvol/mc_engine.hpp"
#include "mdpvol/poisson_solver.hpp"
#include "mdpvol/rate_functions.hpp"
#include "mdpvol/scaling.hpp"

namespace py = pybind11;
using namespace mdpvol;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Experiment experiment_or_throw(const std::string& name) {
    if (auto e = experiment_from_string(name)) {
        return *e;
    }
    throw DomainError("unknown experiment \"" + name + "\"");
}

}  // namespace

PYBIND11_MODULE(_mdpvol, m) {
    m.doc() = "Moderate- and large-deviation rate functions for two-factor stochastic volatility models";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<UnsupportedModelError>(m, "UnsupportedModelError", PyExc_NotImplementedError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("Heston", ModelKind::Heston)
        .value("SteinStein", ModelKind::SteinStein)
        .value("LSV", ModelKind::LSV)
        .value("PowerFamily", ModelKind::PowerFamily)
        .value("ConstantSigma", ModelKind::ConstantSigma)
        .value("Custom", ModelKind::Custom);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_property_readonly("kind", [](const ModelSpec& s) { return s.kind; })
        .def_readonly("rho", &ModelSpec::rho)
        .def_readonly("x0", &ModelSpec::x0)
        .def_readonly("y0", &ModelSpec::y0)
        .def("coefficients",
             [](const ModelSpec& s, double x, double y) {
                 const auto c = eval_coeffs(s, x, y);
                 return py::make_tuple(c.sigma, c.f, c.g);
             },
             py::arg("x"), py::arg("y"), "(sigma, f, g) at (x, y)")
        .def("check_assumptions",
             [](const ModelSpec& s, std::optional<double> q_h, std::optional<double> beta) {
                 py::dict out;
                 for (const auto& c : check_assumptions(s, {q_h, beta}).checks) {
                     out[py::str(c.id)] = c.passed;
                 }
                 return out;
             },
             py::arg("q_h") = py::none(), py::arg("beta") = py::none());

    m.def("make_heston", &make_heston, py::arg("kappa"), py::arg("theta"), py::arg("xi"), py::arg("rho"),
          py::arg("x0") = 0.0, py::arg("y0"));
    m.def("make_stein_stein", &make_stein_stein, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("rho"),
          py::arg("x0"), py::arg("y0"));
    m.def("make_power_family", &make_power_family, py::arg("a"), py::arg("b"), py::arg("c_g"), py::arg("c_sigma"),
          py::arg("nu_g"), py::arg("nu_sigma"), py::arg("rho"), py::arg("x0"), py::arg("y0"));
    m.def("make_constant_sigma", &make_constant_sigma, py::arg("sigma"), py::arg("rho") = 0.0,
          py::arg("x0") = 0.0, py::arg("y0") = 0.0);

    m.def("h_eval", [](double beta, double eps) { return h_eval(ScalingRegime{beta, 1.0, 0.0}, eps); },
          py::arg("beta"), py::arg("eps"));
    m.def("tail_exponent", &tail_exponent, py::arg("nu_sigma"), py::arg("nu_g"));

    py::class_<InvariantMeasure>(m, "InvariantMeasure")
        .def_property_readonly("shape", &InvariantMeasure::shape)
        .def_property_readonly("rate", &InvariantMeasure::rate)
        .def_property_readonly("lo", &InvariantMeasure::lo)
        .def_property_readonly("hi", &InvariantMeasure::hi)
        .def("density", &InvariantMeasure::density, py::arg("y"))
        .def("integrate", [](const InvariantMeasure& mu, const std::function<double(double)>& fn) {
            return mu.integrate(fn).value;
        }, py::arg("fn"));
    m.def("gamma_invariant", &gamma_invariant, py::arg("kappa"), py::arg("theta"), py::arg("xi"));
    m.def("speed_measure", &speed_measure, py::arg("kappa"), py::arg("theta"), py::arg("xi"), py::arg("q_g"));

    m.def("solve_poisson_cev",
          [](const std::function<double(double)>& h, const InvariantMeasure& mu, std::size_t grid_points) {
              PoissonOptions options;
              options.grid_points = grid_points;
              const auto sol = solve_poisson_cev(h, mu, mu.kappa(), mu.theta(), mu.xi(), mu.q_g(), options);
              py::dict out;
              out["y"] = to_array(sol.y);
              out["u"] = to_array(sol.u);
              out["u_prime"] = to_array(sol.u_prime);
              out["h_bar"] = sol.h_bar;
              return out;
          },
          py::arg("h"), py::arg("measure"), py::arg("grid_points") = 2048,
          "Solve L u = H - H_bar against the measure's CEV factor");

    m.def("heston_q_closed_form",
          [](double kappa, double theta, double xi, double rho) {
              return heston_q_closed_form(kappa, theta, xi, rho);
          },
          py::arg("kappa"), py::arg("theta"), py::arg("xi"), py::arg("rho"));
    m.def("large_time_q",
          [](const ModelSpec& model) {
              const auto mu = invariant_measure_for(model);
              return large_time_params(model, mu, solve_phi(model, mu), 1.0, 0.0).q;
          },
          py::arg("model"), "q by quadrature against the invariant measure");
    m.def("share_measure_q", &share_measure_q, py::arg("model"));
    m.def("endpoint_rate", &endpoint_rate, py::arg("q"), py::arg("alpha"), py::arg("x"), py::arg("horizon") = 1.0);
    m.def("minimize_endpoint",
          [](double q, double alpha, double x, double horizon, std::size_t n) {
              return minimize_endpoint(q, alpha, x, horizon, n).value;
          },
          py::arg("q"), py::arg("alpha"), py::arg("x"), py::arg("horizon"), py::arg("n_steps"));

    m.def("heston_lambda_star",
          [](double kappa, double theta, double xi, double rho, double x, const std::string& variant) {
              if (variant != "standard" && variant != "as_printed") {
                  throw DomainError("d_variant must be as_printed or standard");
              }
              const DVariant v = variant == "standard" ? DVariant::Standard : DVariant::AsPrinted;
              return heston_lambda_star(make_ldp_params(kappa, theta, xi, rho, v), x);
          },
          py::arg("kappa"), py::arg("theta"), py::arg("xi"), py::arg("rho"), py::arg("x"),
          py::arg("d_variant") = "as_printed");
    m.def("rv_lambda_star",
          [](double kappa, double theta, double xi, double x) {
              return rv_lambda_star(make_rv_ldp(kappa, theta, xi, theta), x);
          },
          py::arg("kappa"), py::arg("theta"), py::arg("xi"), py::arg("x"));
    m.def("rv_legendre_numeric",
          [](double kappa, double theta, double xi, double x) {
              return fenchel_legendre_numeric(rv_lambda_inf_function(make_rv_ldp(kappa, theta, xi, theta)), x).value;
          },
          py::arg("kappa"), py::arg("theta"), py::arg("xi"), py::arg("x"));
    m.def("curvature", &curvature, py::arg("fn"), py::arg("x0"));

    m.def("simulate",
          [](const ModelSpec& model, std::size_t n_paths, std::size_t n_steps, double t_end, std::uint64_t seed,
             bool antithetic, unsigned threads) {
              SimConfig sim;
              sim.n_paths = n_paths;
              sim.n_steps = n_steps;
              sim.t_end = t_end;
              sim.seed = seed;
              sim.antithetic = antithetic;
              sim.threads = threads;
              PathBatch batch;
              {
                  py::gil_scoped_release release;
                  batch = simulate(model, sim);
              }
              py::dict out;
              out["x_terminal"] = to_array(batch.x_terminal);
              out["y_terminal"] = to_array(batch.y_terminal);
              out["integrated_variance"] = to_array(batch.integrated_variance);
              out["running_max"] = to_array(batch.running_max);
              return out;
          },
          py::arg("model"), py::arg("n_paths"), py::arg("n_steps"), py::arg("t_end"), py::arg("seed") = 1,
          py::arg("antithetic") = false, py::arg("threads") = 1);
    m.def("estimate_smalltime_tail",
          [](const ModelSpec& model, double t, double k, double beta, std::size_t n_paths, std::size_t n_steps,
             std::uint64_t seed) {
              SimConfig sim;
              sim.n_paths = n_paths;
              sim.n_steps = n_steps;
              sim.seed = seed;
              const auto est = estimate_smalltime_tail(model, t, k, beta, sim);
              py::dict out;
              out["p_hat"] = est.p_hat;
              out["ci"] = est.ci_halfwidth;
              out["normalized_log"] = est.normalized_log;
              out["target"] = est.analytic_target;
              return out;
          },
          py::arg("model"), py::arg("t"), py::arg("k"), py::arg("beta"), py::arg("n_paths"), py::arg("n_steps"),
          py::arg("seed") = 1);
    m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("label"));

    m.def("parse_config", [](const std::string& text) { return print_config(parse_config(text)); },
          py::arg("text"), "Validate a JSON config and return its canonical form");
    m.def("run_experiment",
          [](const std::string& name, const std::string& config_text, const std::filesystem::path& out_dir) {
              const auto result = run_experiment(experiment_or_throw(name), parse_config(config_text), out_dir);
              return result.files;
          },
          py::arg("name"), py::arg("config") = "", py::arg("out_dir") = ".");
    m.def("run_acceptance",
          [](std::vector<int> criteria, double q_multiplier) {
              AcceptanceOptions options;
              options.criteria = std::move(criteria);
              options.q_multiplier = q_multiplier;
              const auto report = run_acceptance(options);
              py::list out;
              for (const auto& r : report.results) {
                  py::dict d;
                  d["id"] = r.id;
                  d["name"] = r.name;
                  d["passed"] = r.passed;
                  d["detail"] = r.detail;
                  out.append(d);
              }
              return out;
          },
          py::arg("criteria") = std::vector<int>{}, py::arg("q_multiplier") = 1.0);
}
