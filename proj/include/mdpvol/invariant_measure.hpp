#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "mdpvol/model_zoo.hpp"
#include "mdpvol/path.hpp"

namespace mdpvol {

enum class MeasureKind { GammaClosedForm, SpeedMeasureNumeric };

/// Nodes and weights of a quadrature against the measure; the weights
/// already contain the density.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double apply(const std::function<double(double)>& fn) const;
};

struct Integral {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Stationary law of dY = kappa (theta - Y) dt + xi Y^q_g dZ on (0, inf).
class InvariantMeasure {
public:
    MeasureKind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double theta() const { return theta_; }
    double xi() const { return xi_; }
    double q_g() const { return q_g_; }

    /// Gamma shape 2 kappa theta / xi^2 and rate 2 kappa / xi^2 (q_g = 1/2 only; NaN otherwise).
    double shape() const { return shape_; }
    double rate() const { return rate_; }

    /// Truncated quadrature domain. Mass below lo is handled by a
    /// substitution when the density is singular or slowly vanishing at 0.
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double log_density(double y) const;
    double density(double y) const;

    /// d/dy log density.
    double log_density_slope(double y) const;

    const QuadratureRule& rule() const { return fine_; }
    const QuadratureRule& coarse_rule() const { return coarse_; }

    /// Integral of fn against the measure with |fine - coarse| as the error
    /// estimate. Throws NumericError when fn is too large at hi for the
    /// neglected tail mass to stay below `growth_budget`.
    Integral integrate(const std::function<double(double)>& fn, double growth_budget = 1e-8) const;

    /// Probability mass above hi.
    double tail_mass() const { return tail_mass_; }

    /// Integral of the density over (0, lo] with the leading-order form used
    /// by the quadrature, together with the rule used for it. Empty when the
    /// density vanishes faster than any power at 0.
    const QuadratureRule& near_zero_rule() const { return near_zero_; }

    friend InvariantMeasure gamma_invariant(double kappa, double theta, double xi);
    friend InvariantMeasure speed_measure(double kappa, double theta, double xi, double q_g);

private:
    struct SpeedTable;

    MeasureKind kind_ = MeasureKind::GammaClosedForm;
    double kappa_ = 0.0;
    double theta_ = 0.0;
    double xi_ = 0.0;
    double q_g_ = 0.5;
    double shape_ = 0.0;
    double rate_ = 0.0;
    double log_offset_ = 0.0;
    double log_norm_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double tail_mass_ = 0.0;
    std::shared_ptr<const SpeedTable> table_;
    QuadratureRule fine_;
    QuadratureRule coarse_;
    QuadratureRule near_zero_;

    double log_unnormalized(double y) const;
    void build_rules(const std::vector<double>& breaks);
};

InvariantMeasure gamma_invariant(double kappa, double theta, double xi);

/// Speed-measure density (xi^2 y^2q)^-1 exp(int_1^y 2 kappa (theta - z) / (xi^2 z^2q) dz),
/// normalized numerically. q_g in [1/2, 1).
InvariantMeasure speed_measure(double kappa, double theta, double xi, double q_g);

/// Measure of a model's fast factor. Supports Heston and CEV power families.
InvariantMeasure invariant_measure_for(const ModelSpec& model);

/// lambda_bar(x) = -(gamma / 2) int sigma^2(x, y) mu(dy).
std::function<double(double)> averaged_drift(const ModelSpec& model, const InvariantMeasure& measure,
                                             double gamma);

/// RK4 integration of dX = lambda_bar(X) dt from x0 over [0, horizon].
DiscretePath averaged_state_path(const ModelSpec& model, const InvariantMeasure& measure, double gamma,
                                 double horizon, std::size_t n_steps);

/// int (f F' + g^2 F'' / 2) dmu for the CEV factor of the measure.
double generator_expectation(const InvariantMeasure& measure, const std::function<double(double)>& d1,
                             const std::function<double(double)>& d2);

}  // namespace mdpvol
