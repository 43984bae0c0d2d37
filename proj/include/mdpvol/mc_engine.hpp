#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdpvol/model_zoo.hpp"

namespace mdpvol {

enum class Scheme { EulerFullTruncation };

/// Simulate the eps-delta system instead of the original one.
struct SimScaling {
    double eps = 1.0;
    double delta = 1.0;
};

struct SimConfig {
    std::size_t n_paths = 100000;
    std::size_t n_steps = 100;
    double t_end = 1.0;
    Scheme scheme = Scheme::EulerFullTruncation;
    std::uint64_t seed = 1;
    /// Each base path is paired with its mirror; the batch then holds 2 n_paths paths.
    bool antithetic = false;
    std::optional<SimScaling> scaling;
    unsigned threads = 1;
};

/// Throws DomainError unless n_paths >= 1, n_steps >= 1, t_end > 0 and threads >= 1.
void validate(const SimConfig& config);

/// Paths are processed in chunks of this size; chunk c uses the generator seeded from (seed, c).
inline constexpr std::size_t kChunkPaths = 4096;

struct PathBatch {
    std::vector<double> x_terminal;
    std::vector<double> y_terminal;
    /// Trapezoid rule for int_0^t Y ds (Y clamped at 0 for square-root factors).
    std::vector<double> integrated_variance;
    std::vector<double> running_max;

    std::size_t size() const { return x_terminal.size(); }
    bool operator==(const PathBatch&) const = default;
};

/// Full-truncation Euler simulation. W = rho Z + sqrt(1 - rho^2) Z_perp.
PathBatch simulate(const ModelSpec& model, const SimConfig& config);

struct TailEstimate {
    double p_hat = 0.0;
    double ci_halfwidth = 0.0;
    /// log(p_hat) divided by the speed; -inf when no path hit.
    double normalized_log = 0.0;
    double analytic_target = 0.0;
    double threshold = 0.0;
    std::size_t hits = 0;
    std::size_t n = 0;
    bool zero_hit = false;

    double gap() const { return normalized_log - analytic_target; }
};

/// P(X_t - x0 >= k sqrt(t) t^-beta), normalized by t^-2beta, against -k^2 / (2 sigma(x0, y0)^2).
/// Overrides config.t_end with t.
TailEstimate estimate_smalltime_tail(const ModelSpec& model, double t, double k, double beta,
                                     const SimConfig& config);

/// P(V_t >= x t^(beta + 1/2) + theta t), normalized by t^2beta, against -kappa^2 x^2 / (2 xi^2 theta).
TailEstimate estimate_rv_tail(const ModelSpec& heston, double t, double x, double beta, const SimConfig& config);

struct CallEstimate {
    double price = 0.0;
    double ci_halfwidth = 0.0;
    double normalized_log = 0.0;
    double analytic_target = 0.0;
    double strike_log = 0.0;
    /// P(X_t >= k_t)^(1/2) E[exp(2 X_t)]^(1/2) on the same batch.
    double holder_bound = 0.0;
    double tail_p_hat = 0.0;
    bool zero_hit = false;
};

/// E(exp(X_t - x0) - exp(k_t))_+ with k_t = k sqrt(t) t^-beta; requires k > 0.
CallEstimate estimate_call_smalltime(const ModelSpec& model, double t, double k, double beta,
                                     const SimConfig& config);

/// Deterministic 64-bit sub-seed from a parent seed and a label.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace mdpvol
