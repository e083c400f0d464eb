#pragma once

#include "qdl/sweep.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qdl {

inline constexpr double kRegionSentinel = -1.0;

struct BoundaryPoint {
    std::string curve; // "zero_multiplier_one" or "critical_value_half"
    double axis1 = 0.0;
    double axis2 = 0.0;
};

struct StabilityRegions {
    SweepGrid grid; // quantity STABILITY_CODE, failed cells hold -1
    std::vector<BoundaryPoint> boundary;
};

/// Stability codes over the spec's grid plus samples of the two curves where
/// Phi'(0) = 1 and Phi(1/2) = 1/2.
///
/// For SINGLE these are r1(q), r2(q) in closed form. Otherwise the curves are
/// solved in r (Kn patterns) or in q2 (two-value patterns) for every value of
/// the other axis: sign changes on the axis grid are refined by bisection. Only
/// samples inside the grid's range are kept.
StabilityRegions stability_region_sweep(SweepSpec spec, unsigned threads = 0);

// Just the boundary samples.
std::vector<BoundaryPoint> stability_boundary(const SweepSpec& spec);

// CSV with header `curve,axis1,axis2`.
void write_boundary_csv(const std::vector<BoundaryPoint>& pts, std::ostream& os);

} // namespace qdl
