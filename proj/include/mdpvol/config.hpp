#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdpvol/model_zoo.hpp"
#include "mdpvol/scaling.hpp"

namespace mdpvol {

/// Parse or validation failure; `violations` lists every problem found.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

enum class Experiment { Invariant, Poisson, Rate, Ldp, Mc, Asymptotics, Compare, Acceptance };

const char* to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);
std::vector<std::string> experiment_names();

/// Keys of the "model" block. Unset keys take the documented defaults.
struct ModelConfig {
    std::optional<std::string> kind;
    std::optional<double> kappa, theta, xi, rho, x0, y0;
    std::optional<double> a, b, c_g, c_sigma, nu_g, nu_sigma, sigma;
    std::optional<bool> moment_condition;

    bool operator==(const ModelConfig&) const = default;
};

struct RegimeConfig {
    std::optional<double> beta, gamma, zeta_c;

    bool operator==(const RegimeConfig&) const = default;
};

/// Keys of the "params" block; which keys are allowed depends on the experiment.
struct ParamsConfig {
    std::optional<double> q_g;
    std::optional<std::string> h;
    std::optional<std::int64_t> grid_points;
    std::optional<double> x_min, x_max;
    std::optional<std::int64_t> n_x;
    std::optional<std::string> d_variant;
    std::optional<std::string> target;
    std::optional<double> t, k, x;
    std::optional<std::int64_t> paths, steps, threads;
    std::optional<bool> antithetic;
    std::optional<std::vector<std::int64_t>> criteria;

    bool operator==(const ParamsConfig&) const = default;
};

struct ExperimentConfig {
    std::optional<Experiment> experiment;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    ModelConfig model;
    RegimeConfig regime;
    ParamsConfig params;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the JSON document described in the README. Empty text gives the defaults.
/// Throws ConfigError with every violation (unknown keys come with a suggestion).
ExperimentConfig parse_config(std::string_view text);

/// Canonical JSON text; parse_config(print_config(c)) == c.
std::string print_config(const ExperimentConfig& config);

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Model with defaults filled in: Heston (2, 0.1, 0.5, -0.5), x0 = 0, y0 = theta.
ModelSpec build_model(const ModelConfig& config);

ScalingRegime build_regime(const RegimeConfig& config);

/// Allowed "params" keys for an experiment.
std::vector<std::string> allowed_params(Experiment e);

/// Closest candidate within edit distance 2, if any.
std::optional<std::string> suggest_key(std::string_view key, const std::vector<std::string>& candidates);

}  // namespace mdpvol
