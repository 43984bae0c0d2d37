#include "mdpvol/path.hpp"

#include <cmath>
#include <string>

#include "mdpvol/errors.hpp"

namespace mdpvol {

DiscretePath DiscretePath::sample(double horizon, std::size_t steps,
                                  const std::function<double(double)>& fn) {
    if (steps == 0 || !(horizon > 0.0)) {
        throw DomainError("DiscretePath::sample: need steps >= 1 and horizon > 0");
    }
    DiscretePath path{horizon, std::vector<double>(steps + 1)};
    for (std::size_t i = 0; i <= steps; ++i) {
        path.values[i] = fn(path.time(i));
    }
    return path;
}

void require_valid(const DiscretePath& path) {
    if (path.values.size() < 2) {
        throw DomainError("path: need at least one step");
    }
    if (!(path.horizon > 0.0) || !std::isfinite(path.horizon)) {
        throw DomainError("path: horizon must be positive and finite");
    }
    for (double v : path.values) {
        if (!std::isfinite(v)) {
            throw DomainError("path: non-finite sample");
        }
    }
}

void require_same_grid(const DiscretePath& a, const DiscretePath& b) {
    if (a.values.size() != b.values.size() || a.horizon != b.horizon) {
        throw DomainError("paths do not share a grid (" + std::to_string(a.steps()) + " vs " +
                          std::to_string(b.steps()) + " steps)");
    }
}

}  // namespace mdpvol
