#pragma once

#include "qdl/core_maps.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace qdl {

// |multiplier| within this distance of 1 is treated as neutral.
inline constexpr double kNeutralBand = 1e-9;

enum class Stability {
    LAS,
    UNSTABLE,
    NEUTRAL_LAS,        // |multiplier| = 1, higher-order terms make it attracting
    NEUTRAL_UNSTABLE,   // |multiplier| = 1, higher-order terms make it repelling (or semi-stable)
    NEUTRAL_UNRESOLVED, // |multiplier| = 1 and the available derivatives do not decide
};

std::string_view to_string(Stability s);

inline bool is_attracting(Stability s) { return s == Stability::LAS || s == Stability::NEUTRAL_LAS; }

struct FixedPointRecord {
    double location = 0.0;
    double multiplier = 0.0;
    Stability classification = Stability::UNSTABLE;
    bool gas = false;
};

enum class ScenarioKind {
    ZERO_GAS,
    NONZERO_GAS,
    COEXIST_INVARIANT, // 0 is LAS and [x1, x1*] is forward invariant
    COEXIST_ESCAPING,  // 0 is LAS and the critical value leaves [x1, x1*]
    OTHER,             // no GAS fixed point and no coexistence pair
};

std::string_view to_string(ScenarioKind k);

struct AttractorScenario {
    ScenarioKind kind = ScenarioKind::OTHER;
    FixedPointRecord zero;
    std::vector<FixedPointRecord> nonzero;
    std::optional<double> x1_star; // largest preimage of x1, coexistence cases only
};

// Phi'(0) = r * prod log(q_i)/(q_i - 1); identity links contribute 1.
double multiplier_at_zero(const DeformedMap& m);

/// Stability of the fixed point 0.
///
/// Outside the neutral band the multiplier decides. Inside it a single
/// deformation uses the closed-form criterion (attracting iff q <= 3);
/// longer chains look at the sign of Phi''(0), then Phi'''(0).
FixedPointRecord classify_zero(const DeformedMap& m);

/// Non-zero fixed points, sorted by location.
///
/// Scans g(x) = Phi(x) - x on 10^4 uniform subintervals of [1e-6, 1], refines
/// each sign change by bisection to a bracket of 1e-12, and picks up tangential
/// roots where an extremum of g sits within 1e-10 of zero.
std::vector<FixedPointRecord> find_nonzero_fixed_points(const DeformedMap& m);

// The globally attracting fixed point, if any. The returned record has gas == true.
std::optional<FixedPointRecord> gas_check(const DeformedMap& m);

// r1(q) = (q-1)/log q, with r1(1) = 1.
double curve_r1(double q);
// r2(q) = 4 log((1+q)/2) / log q: the curve Phi(1/2) = 1/2, with r2(1) = 2.
double curve_r2(double q);

struct SpecialConstants {
    double q0 = 0.0; // r1(q0) = 4
    double q1 = 0.0; // r1(q1) = r2(q1)
};

SpecialConstants solve_special_constants();

AttractorScenario attractor_scenario(const DeformedMap& m);

} // namespace qdl
