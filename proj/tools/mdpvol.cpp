#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdpvol/acceptance.hpp"
#include "mdpvol/config.hpp"
#include "mdpvol/errors.hpp"
#include "mdpvol/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitAcceptance = 3;

struct Flags {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    // mc overrides
    std::optional<std::string> model;
    std::optional<std::string> target;
    std::optional<double> t, k, x, beta;
    std::optional<std::int64_t> paths, steps, threads;
    bool antithetic = false;
    // acceptance extras
    std::vector<int> criteria;
    double q_multiplier = 1.0;
};

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw mdpvol::ConfigError({"cannot read config file " + path});
    }
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

mdpvol::ExperimentConfig load(const Flags& f) {
    auto config = mdpvol::parse_config(f.config_path.empty() ? std::string() : read_file(f.config_path));
    if (f.seed) {
        config.seed = *f.seed;
    }
    if (f.model) {
        config.model.kind = *f.model;
    }
    if (f.beta) {
        config.regime.beta = *f.beta;
    }
    auto& p = config.params;
    if (f.target) p.target = *f.target;
    if (f.t) p.t = *f.t;
    if (f.k) p.k = *f.k;
    if (f.x) p.x = *f.x;
    if (f.paths) p.paths = *f.paths;
    if (f.steps) p.steps = *f.steps;
    if (f.threads) p.threads = *f.threads;
    if (f.antithetic) p.antithetic = true;
    if (!f.criteria.empty()) p.criteria = std::vector<std::int64_t>(f.criteria.begin(), f.criteria.end());
    // Re-validate with the command-line overrides applied.
    return mdpvol::parse_config(mdpvol::print_config(config));
}

int run(mdpvol::Experiment e, const Flags& f) {
    const auto config = load(f);
    if (e == mdpvol::Experiment::Acceptance) {
        mdpvol::AcceptanceOptions options;
        options.seed = config.seed.value_or(mdpvol::kDefaultSeed);
        options.q_multiplier = f.q_multiplier;
        if (config.params.criteria) {
            options.criteria.assign(config.params.criteria->begin(), config.params.criteria->end());
        }
        if (f.threads) {
            options.threads = static_cast<unsigned>(*f.threads);
        }
        if (config.experiment && *config.experiment != e) {
            throw mdpvol::ConfigError({"experiment: config is not for \"acceptance\""});
        }
        const auto report = mdpvol::run_acceptance(options);
        const std::string prefix = config.output.value_or("acceptance");
        const std::filesystem::path dir(f.out_dir);
        mdpvol::write_atomic(dir / (prefix + ".json"), mdpvol::to_json_text(mdpvol::acceptance_json(report)));
        const std::string text = mdpvol::acceptance_text(report);
        mdpvol::write_atomic(dir / (prefix + ".txt"), text);
        std::cout << text;
        return report.all_passed() ? kExitOk : kExitAcceptance;
    }
    const auto result = mdpvol::run_experiment(e, config, f.out_dir);
    for (const auto& file : result.files) {
        std::cout << file.string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moderate- and large-deviation tools for two-factor stochastic volatility models"};
    app.require_subcommand(1);
    Flags flags;
    std::optional<mdpvol::Experiment> chosen;

    for (const auto& name : mdpvol::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", flags.config_path, "JSON config file (omit for defaults)");
        sub->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", flags.seed, "top-level seed");
        if (name == "mc") {
            sub->add_option("--model", flags.model, "model kind");
            sub->add_option("--target", flags.target, "smalltime_tail, rv_tail or call");
            sub->add_option("--t", flags.t, "horizon");
            sub->add_option("--k", flags.k, "small-time level k");
            sub->add_option("--x", flags.x, "realised-variance level x");
            sub->add_option("--beta", flags.beta, "moderate-deviation exponent");
            sub->add_option("--paths", flags.paths, "number of paths");
            sub->add_option("--steps", flags.steps, "time steps per path");
            sub->add_option("--threads", flags.threads, "worker threads");
            sub->add_flag("--antithetic", flags.antithetic, "pair each path with its mirror");
        }
        if (name == "acceptance") {
            sub->add_option("--criteria", flags.criteria, "criterion ids to run (default: all)");
            sub->add_option("--q-multiplier", flags.q_multiplier, "scale q in the curvature check");
            sub->add_option("--threads", flags.threads, "worker threads for the Monte Carlo criteria");
        }
        sub->callback([&chosen, name] { chosen = mdpvol::experiment_from_string(name); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        return run(*chosen, flags);
    } catch (const mdpvol::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const mdpvol::DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mdpvol::UnsupportedModelError& e) {
        std::cerr << "unsupported model: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mdpvol::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
