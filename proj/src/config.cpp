#include "mdpvol/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mdpvol/errors.hpp"

namespace mdpvol {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const std::vector<std::string> kTopKeys = {"experiment", "seed", "output", "model", "regime", "params"};
const std::vector<std::string> kModelKeys = {"kind", "kappa", "theta", "xi", "rho", "x0", "y0", "a",
                                             "b", "c_g", "c_sigma", "nu_g", "nu_sigma", "sigma",
                                             "moment_condition"};
const std::vector<std::string> kRegimeKeys = {"beta", "gamma", "zeta_c"};
const std::vector<std::string> kParamKeys = {"q_g", "h", "grid_points", "x_min", "x_max", "n_x",
                                             "d_variant", "target", "t", "k", "x", "paths",
                                             "steps", "threads", "antithetic", "criteria"};
const std::vector<std::string> kModelKinds = {"heston", "stein_stein", "power_family", "constant_sigma"};

std::vector<std::string> keys_for_kind(const std::string& kind) {
    if (kind == "heston") {
        return {"kind", "kappa", "theta", "xi", "rho", "x0", "y0", "moment_condition"};
    }
    if (kind == "stein_stein") {
        return {"kind", "a", "b", "c_g", "rho", "x0", "y0", "moment_condition"};
    }
    if (kind == "power_family") {
        return {"kind", "a", "b", "c_g", "c_sigma", "nu_g", "nu_sigma", "rho", "x0", "y0", "moment_condition"};
    }
    return {"kind", "sigma", "rho", "x0", "y0", "moment_condition"};
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        row[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string fmt(double v) {
    // Shortest form that reads back to the same double.
    for (int precision = 6; precision < 17; ++precision) {
        std::ostringstream os;
        os.precision(precision);
        os << v;
        if (std::stod(os.str()) == v) {
            return os.str();
        }
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Collects violations while reading one JSON object.
class Reader {
public:
    Reader(std::vector<std::string>& errors, std::string prefix) : errors_(errors), prefix_(std::move(prefix)) {}

    void closed(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                std::string msg = "unknown key \"" + key + "\" in " + where;
                if (auto s = suggest_key(key, allowed)) {
                    msg += " (did you mean \"" + *s + "\"?)";
                }
                errors_.push_back(msg);
            }
        }
    }

    void number(const json& obj, const char* key, std::optional<double>& out) {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            errors_.push_back(name(key) + ": expected a number");
            return;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            errors_.push_back(name(key) + ": must be finite");
            return;
        }
        out = d;
    }

    void integer(const json& obj, const char* key, std::optional<std::int64_t>& out) {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            errors_.push_back(name(key) + ": expected an integer");
            return;
        }
        out = v.get<std::int64_t>();
    }

    void text(const json& obj, const char* key, std::optional<std::string>& out) {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_string()) {
            errors_.push_back(name(key) + ": expected a string");
            return;
        }
        out = v.get<std::string>();
    }

    void boolean(const json& obj, const char* key, std::optional<bool>& out) {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            errors_.push_back(name(key) + ": expected true or false");
            return;
        }
        out = v.get<bool>();
    }

    void fail(const std::string& key, const std::string& msg) { errors_.push_back(name(key) + ": " + msg); }

private:
    std::string name(const std::string& key) const { return prefix_ + key; }

    std::vector<std::string>& errors_;
    std::string prefix_;
};

bool require_object(const json& doc, const char* key, std::vector<std::string>& errors) {
    if (!doc.contains(key)) {
        return false;
    }
    if (!doc.at(key).is_object()) {
        errors.push_back(std::string(key) + ": expected an object");
        return false;
    }
    return true;
}

void read_model(const json& obj, ModelConfig& m, std::vector<std::string>& errors) {
    Reader r(errors, "model.");
    r.closed(obj, kModelKeys, "model");
    r.text(obj, "kind", m.kind);
    r.number(obj, "kappa", m.kappa);
    r.number(obj, "theta", m.theta);
    r.number(obj, "xi", m.xi);
    r.number(obj, "rho", m.rho);
    r.number(obj, "x0", m.x0);
    r.number(obj, "y0", m.y0);
    r.number(obj, "a", m.a);
    r.number(obj, "b", m.b);
    r.number(obj, "c_g", m.c_g);
    r.number(obj, "c_sigma", m.c_sigma);
    r.number(obj, "nu_g", m.nu_g);
    r.number(obj, "nu_sigma", m.nu_sigma);
    r.number(obj, "sigma", m.sigma);
    r.boolean(obj, "moment_condition", m.moment_condition);

    const std::string kind = m.kind.value_or("heston");
    if (std::find(kModelKinds.begin(), kModelKinds.end(), kind) == kModelKinds.end()) {
        std::string msg = "unknown model kind \"" + kind + "\"; expected one of heston, stein_stein, power_family, "
                          "constant_sigma";
        if (auto s = suggest_key(kind, kModelKinds)) {
            msg += " (did you mean \"" + *s + "\"?)";
        }
        r.fail("kind", msg);
        return;
    }
    const auto allowed = keys_for_kind(kind);
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::find(kModelKeys.begin(), kModelKeys.end(), key) != kModelKeys.end();
        if (known && std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            r.fail(key, "does not apply to model kind \"" + kind + "\"");
        }
    }
    if (m.kappa && !(*m.kappa > 0.0)) {
        r.fail("kappa", "must be positive");
    }
    if (m.theta && !(*m.theta > 0.0)) {
        r.fail("theta", "must be positive");
    }
    if (m.xi && !(*m.xi > 0.0)) {
        r.fail("xi", "must be positive");
    }
    if (m.rho && !(std::abs(*m.rho) < 1.0)) {
        r.fail("rho", "must lie in (-1, 1)");
    }
    if (m.sigma && !(*m.sigma > 0.0)) {
        r.fail("sigma", "must be positive");
    }
    if (kind == "heston" && m.y0 && !(*m.y0 >= 0.0)) {
        r.fail("y0", "must be non-negative for the Heston factor");
    }
}

void read_regime(const json& obj, RegimeConfig& g, std::vector<std::string>& errors) {
    Reader r(errors, "regime.");
    r.closed(obj, kRegimeKeys, "regime");
    r.number(obj, "beta", g.beta);
    r.number(obj, "gamma", g.gamma);
    r.number(obj, "zeta_c", g.zeta_c);
    if (g.beta && !(*g.beta > 0.0 && *g.beta < 0.5)) {
        r.fail("beta", "must lie in (0, 1/2), got " + fmt(*g.beta));
    }
    if (g.gamma && !(*g.gamma > 0.0)) {
        r.fail("gamma", "must lie in (0, inf), got " + fmt(*g.gamma));
    }
}

void read_params(const json& obj, ParamsConfig& p, const std::vector<std::string>& allowed, const std::string& where,
                 std::vector<std::string>& errors) {
    Reader r(errors, "params.");
    r.closed(obj, allowed, where);
    r.number(obj, "q_g", p.q_g);
    r.text(obj, "h", p.h);
    r.integer(obj, "grid_points", p.grid_points);
    r.number(obj, "x_min", p.x_min);
    r.number(obj, "x_max", p.x_max);
    r.integer(obj, "n_x", p.n_x);
    r.text(obj, "d_variant", p.d_variant);
    r.text(obj, "target", p.target);
    r.number(obj, "t", p.t);
    r.number(obj, "k", p.k);
    r.number(obj, "x", p.x);
    r.integer(obj, "paths", p.paths);
    r.integer(obj, "steps", p.steps);
    r.integer(obj, "threads", p.threads);
    r.boolean(obj, "antithetic", p.antithetic);
    if (obj.contains("criteria")) {
        const json& v = obj.at("criteria");
        if (!v.is_array()) {
            r.fail("criteria", "expected an array of integers");
        } else {
            std::vector<std::int64_t> ids;
            for (const auto& e : v) {
                if (!e.is_number_integer() || e.get<std::int64_t>() < 1 || e.get<std::int64_t>() > 12) {
                    r.fail("criteria", "entries must be integers in [1, 12]");
                    ids.clear();
                    break;
                }
                ids.push_back(e.get<std::int64_t>());
            }
            if (!ids.empty() || v.empty()) {
                p.criteria = ids;
            }
        }
    }

    if (p.q_g && !(*p.q_g >= 0.5 && *p.q_g < 1.0)) {
        r.fail("q_g", "must lie in [1/2, 1)");
    }
    if (p.h && *p.h != "y" && *p.h != "phi") {
        r.fail("h", "must be \"y\" or \"phi\"");
    }
    if (p.grid_points && *p.grid_points < 16) {
        r.fail("grid_points", "must be at least 16");
    }
    if (p.n_x && *p.n_x < 2) {
        r.fail("n_x", "must be at least 2");
    }
    if (p.x_min && p.x_max && !(*p.x_min < *p.x_max)) {
        r.fail("x_min", "must be below x_max");
    }
    if (p.d_variant && *p.d_variant != "as_printed" && *p.d_variant != "standard") {
        r.fail("d_variant", "must be \"as_printed\" or \"standard\"");
    }
    if (p.target && *p.target != "smalltime_tail" && *p.target != "rv_tail" && *p.target != "call") {
        r.fail("target", "must be \"smalltime_tail\", \"rv_tail\" or \"call\"");
    }
    if (p.t && !(*p.t > 0.0)) {
        r.fail("t", "must be positive");
    }
    if (p.k && !(*p.k >= 0.0)) {
        r.fail("k", "must be non-negative");
    }
    if (p.paths && *p.paths < 1) {
        r.fail("paths", "must be at least 1");
    }
    if (p.steps && *p.steps < 1) {
        r.fail("steps", "must be at least 1");
    }
    if (p.threads && *p.threads < 1) {
        r.fail("threads", "must be at least 1");
    }
}

std::string parse_location(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& v : violations) {
              msg += "\n  - " + v;
          }
          return msg;
      }()),
      violations_(std::move(violations)) {}

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::Invariant: return "invariant";
        case Experiment::Poisson: return "poisson";
        case Experiment::Rate: return "rate";
        case Experiment::Ldp: return "ldp";
        case Experiment::Mc: return "mc";
        case Experiment::Asymptotics: return "asymptotics";
        case Experiment::Compare: return "compare";
        case Experiment::Acceptance: return "acceptance";
    }
    return "unknown";
}

std::vector<std::string> experiment_names() {
    return {"invariant", "poisson", "rate", "ldp", "mc", "asymptotics", "compare", "acceptance"};
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
    static const std::map<std::string, Experiment, std::less<>> table = {
        {"invariant", Experiment::Invariant}, {"poisson", Experiment::Poisson},
        {"rate", Experiment::Rate},           {"ldp", Experiment::Ldp},
        {"mc", Experiment::Mc},               {"asymptotics", Experiment::Asymptotics},
        {"compare", Experiment::Compare},     {"acceptance", Experiment::Acceptance}};
    const auto it = table.find(name);
    if (it == table.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> allowed_params(Experiment e) {
    switch (e) {
        case Experiment::Invariant: return {"q_g"};
        case Experiment::Poisson: return {"q_g", "h", "grid_points"};
        case Experiment::Rate: return {"x", "x_min", "x_max", "n_x"};
        case Experiment::Ldp: return {"x_min", "x_max", "n_x", "d_variant"};
        case Experiment::Mc: return {"target", "t", "k", "x", "paths", "steps", "threads", "antithetic"};
        case Experiment::Asymptotics: return {"k", "x", "t"};
        case Experiment::Compare: return {"x_min", "x_max", "n_x", "d_variant"};
        case Experiment::Acceptance: return {"criteria"};
    }
    return {};
}

std::optional<std::string> suggest_key(std::string_view key, const std::vector<std::string>& candidates) {
    std::optional<std::string> best;
    std::size_t best_distance = 3;
    for (const auto& c : candidates) {
        const std::size_t d = edit_distance(key, c);
        if (d < best_distance) {
            best_distance = d;
            best = c;
        }
    }
    return best;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    if (std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
        return config;
    }
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError({"parse error at " + parse_location(text, e.byte) + ": " + e.what()});
    }
    if (!doc.is_object()) {
        throw ConfigError({"top level must be a JSON object"});
    }

    std::vector<std::string> errors;
    Reader top(errors, "");
    top.closed(doc, kTopKeys, "the top level");
    if (doc.contains("experiment")) {
        const json& v = doc.at("experiment");
        if (!v.is_string()) {
            errors.push_back("experiment: expected a string");
        } else if (auto e = experiment_from_string(v.get<std::string>())) {
            config.experiment = e;
        } else {
            std::string msg = "experiment: unknown tag \"" + v.get<std::string>() + "\"";
            if (auto s = suggest_key(v.get<std::string>(), experiment_names())) {
                msg += " (did you mean \"" + *s + "\"?)";
            }
            errors.push_back(msg);
        }
    }
    if (doc.contains("seed")) {
        const json& v = doc.at("seed");
        if (v.is_number_unsigned()) {
            config.seed = v.get<std::uint64_t>();
        } else {
            errors.push_back("seed: expected a non-negative integer");
        }
    }
    top.text(doc, "output", config.output);
    if (config.output &&
        (config.output->empty() || config.output->find_first_of("/\\") != std::string::npos)) {
        errors.push_back("output: must be a non-empty file-name prefix without path separators");
    }
    if (require_object(doc, "model", errors)) {
        read_model(doc.at("model"), config.model, errors);
    }
    if (require_object(doc, "regime", errors)) {
        read_regime(doc.at("regime"), config.regime, errors);
    }
    if (require_object(doc, "params", errors)) {
        if (config.experiment) {
            read_params(doc.at("params"), config.params, allowed_params(*config.experiment),
                        std::string("params for experiment \"") + to_string(*config.experiment) + "\"", errors);
        } else {
            read_params(doc.at("params"), config.params, kParamKeys, "params", errors);
        }
    }
    if (errors.empty()) {
        try {
            (void)build_model(config.model);
        } catch (const DomainError& e) {
            errors.push_back(std::string("model: ") + e.what());
        }
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return config;
}

std::string print_config(const ExperimentConfig& c) {
    ordered doc = ordered::object();
    if (c.experiment) {
        doc["experiment"] = to_string(*c.experiment);
    }
    if (c.seed) {
        doc["seed"] = *c.seed;
    }
    if (c.output) {
        doc["output"] = *c.output;
    }
    auto put = [](ordered& obj, const char* key, const auto& value) {
        if (value) {
            obj[key] = *value;
        }
    };
    ordered model = ordered::object();
    put(model, "kind", c.model.kind);
    put(model, "kappa", c.model.kappa);
    put(model, "theta", c.model.theta);
    put(model, "xi", c.model.xi);
    put(model, "rho", c.model.rho);
    put(model, "x0", c.model.x0);
    put(model, "y0", c.model.y0);
    put(model, "a", c.model.a);
    put(model, "b", c.model.b);
    put(model, "c_g", c.model.c_g);
    put(model, "c_sigma", c.model.c_sigma);
    put(model, "nu_g", c.model.nu_g);
    put(model, "nu_sigma", c.model.nu_sigma);
    put(model, "sigma", c.model.sigma);
    put(model, "moment_condition", c.model.moment_condition);
    if (!model.empty()) {
        doc["model"] = model;
    }
    ordered regime = ordered::object();
    put(regime, "beta", c.regime.beta);
    put(regime, "gamma", c.regime.gamma);
    put(regime, "zeta_c", c.regime.zeta_c);
    if (!regime.empty()) {
        doc["regime"] = regime;
    }
    ordered params = ordered::object();
    const ParamsConfig& p = c.params;
    put(params, "q_g", p.q_g);
    put(params, "h", p.h);
    put(params, "grid_points", p.grid_points);
    put(params, "x_min", p.x_min);
    put(params, "x_max", p.x_max);
    put(params, "n_x", p.n_x);
    put(params, "d_variant", p.d_variant);
    put(params, "target", p.target);
    put(params, "t", p.t);
    put(params, "k", p.k);
    put(params, "x", p.x);
    put(params, "paths", p.paths);
    put(params, "steps", p.steps);
    put(params, "threads", p.threads);
    put(params, "antithetic", p.antithetic);
    put(params, "criteria", p.criteria);
    if (!params.empty()) {
        doc["params"] = params;
    }
    return doc.dump(2) + "\n";
}

ModelSpec build_model(const ModelConfig& m) {
    const std::string kind = m.kind.value_or("heston");
    const double rho = m.rho.value_or(kind == "heston" ? -0.5 : 0.0);
    const double x0 = m.x0.value_or(0.0);
    ModelSpec model;
    if (kind == "heston") {
        const double theta = m.theta.value_or(0.1);
        model = make_heston(m.kappa.value_or(2.0), theta, m.xi.value_or(0.5), rho, x0, m.y0.value_or(theta));
    } else if (kind == "stein_stein") {
        const double a = m.a.value_or(0.2);
        const double b = m.b.value_or(-2.0);
        model = make_stein_stein(a, b, m.c_g.value_or(0.5), rho, x0, m.y0.value_or(-a / b));
    } else if (kind == "power_family") {
        const double a = m.a.value_or(0.2);
        const double b = m.b.value_or(-2.0);
        model = make_power_family(a, b, m.c_g.value_or(0.5), m.c_sigma.value_or(1.0), m.nu_g.value_or(0.5),
                                  m.nu_sigma.value_or(0.5), rho, x0, m.y0.value_or(-a / b));
    } else if (kind == "constant_sigma") {
        model = make_constant_sigma(m.sigma.value_or(0.2), rho, x0, m.y0.value_or(0.0));
    } else {
        throw DomainError("unknown model kind \"" + kind + "\"");
    }
    model.moment_condition = m.moment_condition.value_or(true);
    return model;
}

ScalingRegime build_regime(const RegimeConfig& g) {
    ScalingRegime regime;
    regime.beta = g.beta.value_or(regime.beta);
    regime.gamma = g.gamma.value_or(regime.gamma);
    regime.zeta_c = g.zeta_c.value_or(regime.zeta_c);
    validate(regime);
    return regime;
}

}  // namespace mdpvol
