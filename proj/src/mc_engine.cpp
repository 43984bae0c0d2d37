#include "mdpvol/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "mdpvol/errors.hpp"
#include "mdpvol/scaling.hpp"

namespace mdpvol {
namespace {

constexpr double kOverflow = 1e12;
constexpr double kZ95 = 1.959963984540054;

struct Multipliers {
    double drift_x = 1.0;
    double diff_x = 1.0;
    double drift_y = 1.0;
    double diff_y = 1.0;
};

/// Coefficients through the model's function handles.
struct GenericCoefficients {
    const ModelSpec& model;
    void operator()(double x, double y, double& s, double& f, double& g) const {
        s = model.sigma(x, y);
        f = model.f(x, y);
        g = model.g(x, y);
    }
};

/// Inline Heston coefficients; same arithmetic as make_heston's handles.
struct HestonCoefficients {
    double kappa;
    double theta;
    double xi;
    void operator()(double, double y, double& s, double& f, double& g) const {
        const double yp = std::max(y, 0.0);
        s = std::sqrt(yp);
        f = kappa * (theta - yp);
        g = xi * std::sqrt(yp);
    }
};

struct ConstantSigmaCoefficients {
    double sigma;
    void operator()(double, double y, double& s, double& f, double& g) const {
        s = sigma;
        f = -y;
        g = 1.0;
    }
};

struct ChunkOutput {
    double* x;
    double* y;
    double* v;
    double* m;
};

template <class Coefficients>
void run_chunk(const Coefficients& coeffs, const ModelSpec& model, const SimConfig& config,
               const Multipliers& mult, std::size_t chunk, std::size_t base_paths, ChunkOutput out) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal;

    const double dt = config.t_end / static_cast<double>(config.n_steps);
    const double sq = std::sqrt(dt);
    const double rho = model.rho;
    const double rho_bar = std::sqrt(1.0 - rho * rho);
    const double drift_sign = model.measure == PricingMeasure::Share ? 0.5 : -0.5;
    const bool clamp = model.clamps_factor;
    const std::size_t copies = config.antithetic ? 2 : 1;
    auto visible = [clamp](double y) { return clamp ? std::max(y, 0.0) : y; };

    std::vector<double> z(2 * config.n_steps);
    for (std::size_t p = 0; p < base_paths; ++p) {
        for (auto& v : z) {
            v = normal(engine);
        }
        for (std::size_t c = 0; c < copies; ++c) {
            const double mirror = c == 0 ? 1.0 : -1.0;
            double x = model.x0;
            double y = model.y0;
            double integral = 0.0;
            double peak = x;
            for (std::size_t i = 0; i < config.n_steps; ++i) {
                const double zy = mirror * z[2 * i];
                const double zp = mirror * z[2 * i + 1];
                const double w = rho * zy + rho_bar * zp;
                double s = 0.0;
                double f = 0.0;
                double g = 0.0;
                coeffs(x, y, s, f, g);
                const double x_next = x + drift_sign * s * s * mult.drift_x * dt + mult.diff_x * s * sq * w;
                const double y_next = y + mult.drift_y * f * dt + mult.diff_y * g * sq * zy;
                integral += 0.5 * (visible(y) + visible(y_next)) * dt;
                x = x_next;
                y = y_next;
                if (!(std::abs(x) <= kOverflow)) {
                    throw NumericError("simulation overflow: |X| exceeded 1e12 at step " + std::to_string(i + 1));
                }
                peak = std::max(peak, x);
            }
            const std::size_t idx = p * copies + c;
            out.x[idx] = x;
            out.y[idx] = visible(y);
            out.v[idx] = integral;
            out.m[idx] = peak;
        }
    }
}

template <class Coefficients>
void run_all(const Coefficients& coeffs, const ModelSpec& model, const SimConfig& config,
             const Multipliers& mult, PathBatch& batch) {
    const std::size_t copies = config.antithetic ? 2 : 1;
    const std::size_t chunks = (config.n_paths + kChunkPaths - 1) / kChunkPaths;
    auto work = [&](std::size_t c) {
        const std::size_t first = c * kChunkPaths;
        const std::size_t count = std::min(kChunkPaths, config.n_paths - first);
        const std::size_t offset = first * copies;
        run_chunk(coeffs, model, config, mult, c, count,
                  ChunkOutput{batch.x_terminal.data() + offset, batch.y_terminal.data() + offset,
                              batch.integrated_variance.data() + offset, batch.running_max.data() + offset});
    };
    const unsigned threads = std::min<unsigned>(config.threads, static_cast<unsigned>(chunks));
    if (threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            work(c);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < chunks; c = next++) {
                try {
                    work(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double bernoulli_ci(double p, std::size_t n) {
    return kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

void require_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("t must be positive");
    }
}

void require_beta(double beta) {
    if (!(beta > 0.0 && beta < 0.5)) {
        throw DomainError("beta must lie in (0, 1/2)");
    }
}

TailEstimate tail_from(const std::vector<double>& values, double shift, double threshold, double speed,
                       double target) {
    TailEstimate est;
    est.n = values.size();
    est.threshold = threshold;
    est.analytic_target = target;
    for (double v : values) {
        if (v - shift >= threshold) {
            ++est.hits;
        }
    }
    est.p_hat = static_cast<double>(est.hits) / static_cast<double>(est.n);
    est.ci_halfwidth = bernoulli_ci(est.p_hat, est.n);
    est.zero_hit = est.hits == 0;
    est.normalized_log = est.zero_hit ? -std::numeric_limits<double>::infinity() : std::log(est.p_hat) / speed;
    return est;
}

}  // namespace

void validate(const SimConfig& config) {
    if (config.n_paths < 1) {
        throw DomainError("n_paths must be at least 1");
    }
    if (config.n_steps < 1) {
        throw DomainError("n_steps must be at least 1");
    }
    if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
        throw DomainError("t_end must be positive");
    }
    if (config.threads < 1) {
        throw DomainError("threads must be at least 1");
    }
}

PathBatch simulate(const ModelSpec& model, const SimConfig& config) {
    validate(config);
    if (!std::isfinite(model.x0) || !std::isfinite(model.y0)) {
        throw DomainError("initial state must be finite");
    }
    Multipliers mult;
    if (config.scaling) {
        const auto m = scale_multipliers(config.scaling->eps, config.scaling->delta);
        mult = {m.drift_x, m.diff_x, m.drift_y, m.diff_y};
    }
    const std::size_t total = config.n_paths * (config.antithetic ? 2 : 1);
    PathBatch batch;
    batch.x_terminal.resize(total);
    batch.y_terminal.resize(total);
    batch.integrated_variance.resize(total);
    batch.running_max.resize(total);
    if (model.kind == ModelKind::Heston) {
        run_all(HestonCoefficients{model.params.kappa, model.params.theta, model.params.xi}, model, config, mult,
                batch);
    } else if (model.kind == ModelKind::ConstantSigma) {
        run_all(ConstantSigmaCoefficients{model.params.sigma}, model, config, mult, batch);
    } else {
        run_all(GenericCoefficients{model}, model, config, mult, batch);
    }
    return batch;
}

TailEstimate estimate_smalltime_tail(const ModelSpec& model, double t, double k, double beta,
                                     const SimConfig& config) {
    require_time(t);
    require_beta(beta);
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw DomainError("k must be non-negative");
    }
    SimConfig cfg = config;
    cfg.t_end = t;
    const double h = std::pow(t, -beta);
    const double threshold = k * std::sqrt(t) * h;
    const double s0 = initial_volatility(model);
    const auto batch = simulate(model, cfg);
    return tail_from(batch.x_terminal, model.x0, threshold, h * h, -k * k / (2.0 * s0 * s0));
}

TailEstimate estimate_rv_tail(const ModelSpec& heston, double t, double x, double beta, const SimConfig& config) {
    require_time(t);
    require_beta(beta);
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("x must be positive");
    }
    const CevFactor cev = cev_factor(heston);
    SimConfig cfg = config;
    cfg.t_end = t;
    const double threshold = x * std::pow(t, beta + 0.5) + cev.theta * t;
    const double target = -cev.kappa * cev.kappa * x * x / (2.0 * cev.xi * cev.xi * cev.theta);
    const auto batch = simulate(heston, cfg);
    return tail_from(batch.integrated_variance, 0.0, threshold, std::pow(t, 2.0 * beta), target);
}

CallEstimate estimate_call_smalltime(const ModelSpec& model, double t, double k, double beta,
                                     const SimConfig& config) {
    require_time(t);
    require_beta(beta);
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("k must be positive for the small-time call asymptotics");
    }
    SimConfig cfg = config;
    cfg.t_end = t;
    const double h = std::pow(t, -beta);
    const double kt = k * std::sqrt(t) * h;
    const double strike = std::exp(kt);
    const double s0 = initial_volatility(model);
    const auto batch = simulate(model, cfg);
    const auto n = static_cast<double>(batch.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    double second_moment = 0.0;
    std::size_t hits = 0;
    for (double xv : batch.x_terminal) {
        const double dx = xv - model.x0;
        const double payoff = std::max(std::exp(dx) - strike, 0.0);
        sum += payoff;
        sum_sq += payoff * payoff;
        second_moment += std::exp(2.0 * dx);
        if (dx >= kt) {
            ++hits;
        }
    }
    CallEstimate est;
    est.strike_log = kt;
    est.price = sum / n;
    const double var = std::max(sum_sq / n - est.price * est.price, 0.0);
    est.ci_halfwidth = kZ95 * std::sqrt(var / n);
    est.analytic_target = -k * k / (2.0 * s0 * s0);
    est.tail_p_hat = static_cast<double>(hits) / n;
    est.holder_bound = std::sqrt(est.tail_p_hat) * std::sqrt(second_moment / n);
    est.zero_hit = est.price == 0.0;
    est.normalized_log = est.zero_hit ? -std::numeric_limits<double>::infinity() : std::log(est.price) / (h * h);
    return est;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed ^ (hash + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace mdpvol
