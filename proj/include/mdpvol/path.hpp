#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mdpvol {

/// Samples of a scalar path on the uniform grid t_i = i * horizon / steps.
struct DiscretePath {
    double horizon = 1.0;
    std::vector<double> values;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double step() const { return horizon / static_cast<double>(steps()); }
    double time(std::size_t i) const { return step() * static_cast<double>(i); }
    double front() const { return values.front(); }
    double back() const { return values.back(); }

    /// Forward difference on cell i, i.e. (v[i+1] - v[i]) / step.
    double slope(std::size_t i) const { return (values[i + 1] - values[i]) / step(); }

    static DiscretePath sample(double horizon, std::size_t steps,
                               const std::function<double(double)>& fn);
};

/// Throws DomainError unless both paths live on the same grid.
void require_same_grid(const DiscretePath& a, const DiscretePath& b);

/// Throws DomainError for empty paths, non-positive horizons or non-finite samples.
void require_valid(const DiscretePath& path);

}  // namespace mdpvol
