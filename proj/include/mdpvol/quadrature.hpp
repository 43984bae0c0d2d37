#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mdpvol::quadrature {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached n-point rule; nodes ascending. Thread-safe.
const GaussLegendre& gauss_legendre(std::size_t n);

/// n-point Gauss-Legendre approximation of the integral of fn over [a, b].
double integrate(const std::function<double(double)>& fn, double a, double b, std::size_t n = 16);

/// Composite rule over the consecutive panels defined by `breaks`.
double integrate_panels(const std::function<double(double)>& fn, std::span<const double> breaks,
                        std::size_t n = 16);

/// `count` points geometrically spaced from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

}  // namespace mdpvol::quadrature
