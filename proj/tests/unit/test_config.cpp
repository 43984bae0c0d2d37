#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "mdpvol/config.hpp"
#include "mdpvol/errors.hpp"

using namespace mdpvol;

namespace {

std::vector<std::string> violations_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
    EXPECT_EQ(parse_config(""), ExperimentConfig{});
    EXPECT_EQ(parse_config("  \n"), ExperimentConfig{});
    EXPECT_EQ(parse_config("{}"), ExperimentConfig{});
}

TEST(Config, DefaultModelIsReferenceHeston) {
    const ModelSpec m = build_model(ModelConfig{});
    EXPECT_EQ(m.kind, ModelKind::Heston);
    EXPECT_EQ(m.params.kappa, 2.0);
    EXPECT_EQ(m.params.theta, 0.1);
    EXPECT_EQ(m.params.xi, 0.5);
    EXPECT_EQ(m.rho, -0.5);
    EXPECT_EQ(m.y0, 0.1);
    EXPECT_TRUE(m.moment_condition);
    const ScalingRegime r = build_regime(RegimeConfig{});
    EXPECT_EQ(r, ScalingRegime{});
}

TEST(Config, ParsesFullDocument) {
    const ExperimentConfig c = parse_config(R"({
        "experiment": "mc", "seed": 7, "output": "run",
        "model": {"kind": "heston", "kappa": 3, "rho": -0.2},
        "regime": {"beta": 0.3},
        "params": {"target": "rv_tail", "paths": 100, "antithetic": true}
    })");
    EXPECT_EQ(c.experiment, Experiment::Mc);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.model.kappa, 3.0);
    EXPECT_EQ(c.regime.beta, 0.3);
    EXPECT_EQ(c.params.paths, 100);
    EXPECT_EQ(c.params.antithetic, true);
    EXPECT_FALSE(c.params.t.has_value());
}

TEST(Config, RoundTripProperty) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        ExperimentConfig c;
        c.seed = rng();
        if (u(rng) < 0.5) c.model.kappa = 0.5 + 3.0 * u(rng);
        if (u(rng) < 0.5) c.model.rho = -0.9 + 1.8 * u(rng);
        if (u(rng) < 0.5) c.regime.beta = 0.01 + 0.48 * u(rng);
        if (u(rng) < 0.5) c.regime.zeta_c = u(rng);
        if (u(rng) < 0.5) {
            c.experiment = Experiment::Ldp;
            c.params.x_min = -0.3 * u(rng) - 0.01;
            c.params.x_max = 0.3 * u(rng);
            c.params.d_variant = u(rng) < 0.5 ? "standard" : "as_printed";
        } else {
            c.experiment = Experiment::Mc;
            c.params.t = 0.001 + u(rng);
            c.params.paths = 1 + static_cast<std::int64_t>(1000 * u(rng));
        }
        EXPECT_EQ(parse_config(print_config(c)), c) << print_config(c);
    }
}

TEST(Config, BetaOutOfRange) {
    const auto v = violations_of(R"({"regime": {"beta": 0.7}})");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("beta"), std::string::npos);
    EXPECT_NE(v[0].find("must lie in (0, 1/2)"), std::string::npos);
}

TEST(Config, UnknownKeySuggestion) {
    const auto v = violations_of(R"({"model": {"kapa": 2}})");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("did you mean \"kappa\""), std::string::npos);
    EXPECT_EQ(suggest_key("thta", {"theta", "xi"}), "theta");
    EXPECT_FALSE(suggest_key("zzzzzz", {"theta", "xi"}).has_value());
}

TEST(Config, EveryViolationIsListed) {
    const auto v = violations_of(
        R"({"regime": {"beta": 0.7, "gamma": -1}, "model": {"xi": 0.5, "sigma": 1}, "params": {"paths": 0}})");
    EXPECT_GE(v.size(), 4u);
    EXPECT_TRUE(any_contains(v, "beta"));
    EXPECT_TRUE(any_contains(v, "gamma"));
    EXPECT_TRUE(any_contains(v, "sigma"));
    EXPECT_TRUE(any_contains(v, "paths"));
}

TEST(Config, ModelKeysDependOnKind) {
    EXPECT_TRUE(violations_of(R"({"model": {"kind": "constant_sigma", "sigma": 0.3}})").empty());
    EXPECT_FALSE(violations_of(R"({"model": {"kind": "constant_sigma", "kappa": 1}})").empty());
    EXPECT_FALSE(violations_of(R"({"model": {"kind": "hestn"}})").empty());
}

TEST(Config, ParamsDependOnExperiment) {
    EXPECT_TRUE(violations_of(R"({"experiment": "mc", "params": {"paths": 10}})").empty());
    EXPECT_FALSE(violations_of(R"({"experiment": "ldp", "params": {"paths": 10}})").empty());
}

TEST(Config, ParseErrorReportsPosition) {
    const auto v = violations_of("{\n  \"seed\": ,\n}");
    ASSERT_FALSE(v.empty());
    EXPECT_NE(v[0].find("line 2"), std::string::npos);
}

TEST(Config, OutputMustBePrefix) {
    EXPECT_FALSE(violations_of(R"({"output": "a/b"})").empty());
}

TEST(Config, DomainErrorsBecomeViolations) {
    EXPECT_FALSE(violations_of(R"({"model": {"rho": 1.5}})").empty());
}

TEST(Config, ExperimentNames) {
    for (const auto& name : experiment_names()) {
        const auto e = experiment_from_string(name);
        ASSERT_TRUE(e.has_value()) << name;
        EXPECT_EQ(to_string(*e), name);
    }
    EXPECT_FALSE(experiment_from_string("nope").has_value());
}
