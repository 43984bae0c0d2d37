#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mdpvol/invariant_measure.hpp"
#include "mdpvol/model_zoo.hpp"

namespace mdpvol {

enum class ClosedFormTag { HestonPhiPrime, CIRLinearH };

/// Constant-derivative solution u(y) = slope (y - center).
struct ClosedForm {
    ClosedFormTag tag;
    double slope;
    double center;
};

/// Solution of L_Y u = H - H_bar with int u dmu = 0 on a geometric grid.
struct PoissonSolution {
    std::vector<double> y;
    std::vector<double> u;
    std::vector<double> u_prime;
    /// u'' from the equation itself, used for Hermite interpolation of u'.
    std::vector<double> u_second;
    /// Left-integral and right-tail forms of u'; u_prime takes the left form
    /// below the median of the measure and the right form above it.
    std::vector<double> u_prime_left;
    std::vector<double> u_prime_right;
    std::optional<ClosedForm> closed_form;
    double h_bar = 0.0;
    double centering_residual = 0.0;

    /// Interpolated values; outside the grid u is extended linearly and u' is held constant.
    double u_at(double y) const;
    double u_prime_at(double y) const;
};

/// Closed-form solution of L_Y Phi = (sigma^2 - sigma_bar^2) / 2 for the Heston factor:
/// Phi' = -1 / (2 kappa), Phi = -(y - theta) / (2 kappa).
PoissonSolution solve_phi_heston(double kappa, double theta, std::size_t grid_points = 2048);

struct PoissonOptions {
    double q_h = 1.0;
    std::size_t grid_points = 2048;
};

/// Numerical solution for the CEV factor dY = kappa (theta - Y) dt + xi Y^q_g dZ via
/// u'(y) = 2 / (xi^2 y^2q m(y)) int_0^y (H - H_bar) m.
PoissonSolution solve_poisson_cev(const std::function<double(double)>& h, const InvariantMeasure& measure,
                                  double kappa, double theta, double xi, double q_g,
                                  const PoissonOptions& options = {});

/// Phi for a model with a CEV factor. The right-hand side is (sigma^2 - sigma_bar^2) / 2,
/// with the sign flipped under the Share measure. Heston uses the closed form.
PoissonSolution solve_phi(const ModelSpec& model, const InvariantMeasure& measure);

/// max over interior grid points of |f u' + g^2 u'' / 2 - rhs| with u'' from central differences of u'.
double generator_residual(const ModelSpec& model, const PoissonSolution& solution,
                          const std::function<double(double)>& rhs);

}  // namespace mdpvol
