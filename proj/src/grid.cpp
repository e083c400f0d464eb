#include "qdl/grid.hpp"

#include "qdl/errors.hpp"

#include <cmath>

namespace qdl {

std::vector<double> Axis::values() const
{
    validate();
    const double slack = 1e-9 * step;
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double v = min + static_cast<double>(i) * step;
        const bool inside = include_max ? v <= max + slack : v < max - slack;
        if (!inside) {
            break;
        }
        if (v > 0.0) {
            out.push_back(v);
        }
    }
    return out;
}

void Axis::validate() const
{
    if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step)) {
        throw SpecError("axis '" + name + "' has a non-finite bound or step");
    }
    if (!(step > 0.0)) {
        throw SpecError("axis '" + name + "' needs a positive step");
    }
    if (max < min) {
        throw SpecError("axis '" + name + "' has max < min");
    }
    if ((max - min) / step > 1e8) {
        throw SpecError("axis '" + name + "' would have more than 1e8 points");
    }
}

} // namespace qdl
