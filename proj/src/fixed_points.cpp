#include "qdl/fixed_points.hpp"

#include "bisect.hpp"
#include "qdl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qdl {

namespace {

constexpr int kScanIntervals = 10000;
constexpr double kScanCutoff = 1e-6;
constexpr double kRootTolerance = 1e-12;
constexpr double kTangencyThreshold = 1e-10;
constexpr int kGasGridPoints = 10000;

Stability classify_by_multiplier(double m)
{
    if (std::abs(m) < 1.0 - kNeutralBand) {
        return Stability::LAS;
    }
    if (std::abs(m) > 1.0 + kNeutralBand) {
        return Stability::UNSTABLE;
    }
    return Stability::NEUTRAL_UNRESOLVED;
}

// Interior fixed point (attracting or repelling from both sides).
Stability classify_interior(const DerivativeBundle& j)
{
    const Stability s = classify_by_multiplier(j.d1);
    if (s != Stability::NEUTRAL_UNRESOLVED) {
        return s;
    }
    if (j.d1 < 0.0) {
        // multiplier -1 with negative Schwarzian derivative
        return Stability::NEUTRAL_LAS;
    }
    if (std::abs(j.d2) > kNeutralBand) {
        return Stability::NEUTRAL_UNSTABLE; // semi-stable tangency
    }
    if (j.d3 < 0.0) {
        return Stability::NEUTRAL_LAS;
    }
    return j.d3 > 0.0 ? Stability::NEUTRAL_UNSTABLE : Stability::NEUTRAL_UNRESOLVED;
}

FixedPointRecord make_record(const DeformedMap& m, double x)
{
    const DerivativeBundle j = jet(m, x);
    return FixedPointRecord{x, j.d1, classify_interior(j), false};
}

bool below_diagonal_on_grid(const DeformedMap& m)
{
    for (int i = 1; i <= kGasGridPoints; ++i) {
        const double x = static_cast<double>(i) / (kGasGridPoints + 1);
        if (!(eval_map(m, x) < x)) {
            return false;
        }
    }
    return true;
}

// Index into `nonzero` of the GAS point, -1 for the fixed point 0, nullopt for none.
std::optional<int> locate_gas(const DeformedMap& m, const FixedPointRecord& zero,
                              const std::vector<FixedPointRecord>& nonzero)
{
    if (is_attracting(zero.classification)) {
        if (below_diagonal_on_grid(m)) {
            return -1;
        }
        return std::nullopt;
    }
    for (std::size_t i = 0; i < nonzero.size(); ++i) {
        if (is_attracting(nonzero[i].classification)) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

} // namespace

std::string_view to_string(Stability s)
{
    switch (s) {
    case Stability::LAS: return "LAS";
    case Stability::UNSTABLE: return "UNSTABLE";
    case Stability::NEUTRAL_LAS: return "NEUTRAL_LAS";
    case Stability::NEUTRAL_UNSTABLE: return "NEUTRAL_UNSTABLE";
    case Stability::NEUTRAL_UNRESOLVED: return "NEUTRAL_UNRESOLVED";
    }
    return "?";
}

std::string_view to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::ZERO_GAS: return "ZERO_GAS";
    case ScenarioKind::NONZERO_GAS: return "NONZERO_GAS";
    case ScenarioKind::COEXIST_INVARIANT: return "COEXIST_INVARIANT";
    case ScenarioKind::COEXIST_ESCAPING: return "COEXIST_ESCAPING";
    case ScenarioKind::OTHER: return "OTHER";
    }
    return "?";
}

double multiplier_at_zero(const DeformedMap& m)
{
    double mult = m.r();
    for (const auto& phi : m.deformations()) {
        mult *= phi.d1(0.0);
    }
    return mult;
}

FixedPointRecord classify_zero(const DeformedMap& m)
{
    FixedPointRecord rec{0.0, multiplier_at_zero(m), Stability::UNSTABLE, false};
    rec.classification = classify_by_multiplier(rec.multiplier);
    if (rec.classification != Stability::NEUTRAL_UNRESOLVED) {
        return rec;
    }

    const Deformation* single = nullptr;
    int active = 0;
    for (const auto& phi : m.deformations()) {
        if (!phi.is_identity()) {
            single = &phi;
            ++active;
        }
    }
    if (active <= 1) {
        // Phi''(0) = q - 3 on the curve r log q = q - 1, Phi'''(0) = -8 at q = 3
        const double q = single ? single->q() : 1.0;
        rec.classification = q <= 3.0 ? Stability::NEUTRAL_LAS : Stability::NEUTRAL_UNSTABLE;
        return rec;
    }

    // 0 is one-sided: only x > 0 matters, so the sign of Phi''(0) decides.
    const DerivativeBundle j = jet(m, 0.0);
    if (j.d2 < -kNeutralBand) {
        rec.classification = Stability::NEUTRAL_LAS;
    } else if (j.d2 > kNeutralBand) {
        rec.classification = Stability::NEUTRAL_UNSTABLE;
    } else {
        rec.classification = j.d3 < 0.0 ? Stability::NEUTRAL_LAS : Stability::NEUTRAL_UNRESOLVED;
    }
    return rec;
}

std::vector<FixedPointRecord> find_nonzero_fixed_points(const DeformedMap& m)
{
    auto g = [&m](double x) { return eval_map(m, x) - x; };
    auto dg = [&m](double x) { return jet(m, x).d1 - 1.0; };

    const double h = (1.0 - kScanCutoff) / kScanIntervals;
    auto node = [h](int i) { return i == kScanIntervals ? 1.0 : kScanCutoff + i * h; };

    std::vector<double> roots;
    auto add_root = [&roots](double x) {
        for (double r : roots) {
            if (std::abs(r - x) < 1e-9) {
                return;
            }
        }
        roots.push_back(x);
    };

    double x_prev = node(0);
    double g_prev = g(x_prev);
    double dg_prev = dg(x_prev);
    if (g_prev == 0.0) {
        add_root(x_prev);
    }
    for (int i = 1; i <= kScanIntervals; ++i) {
        const double x = node(i);
        const double gx = g(x);
        const double dgx = dg(x);

        if (gx == 0.0) {
            add_root(x);
        } else if (g_prev != 0.0 && (gx < 0.0) != (g_prev < 0.0)) {
            add_root(detail::bisect_root(g, x_prev, x, kRootTolerance, "fixed point"));
        } else if (g_prev != 0.0 && (dgx < 0.0) != (dg_prev < 0.0)) {
            // g keeps its sign at both nodes but turns around in between: either a
            // tangency or a pair of roots closer than the grid spacing.
            const double xe = detail::bisect_root(dg, x_prev, x, kRootTolerance, "extremum of Phi(x) - x");
            const double ge = g(xe);
            if (std::abs(ge) <= kTangencyThreshold) {
                add_root(xe);
            } else if ((ge < 0.0) != (gx < 0.0)) {
                add_root(detail::bisect_root(g, x_prev, xe, kRootTolerance, "fixed point"));
                add_root(detail::bisect_root(g, xe, x, kRootTolerance, "fixed point"));
            }
        }
        x_prev = x;
        g_prev = gx;
        dg_prev = dgx;
    }

    std::sort(roots.begin(), roots.end());
    std::vector<FixedPointRecord> out;
    out.reserve(roots.size());
    for (double x : roots) {
        out.push_back(make_record(m, x));
    }
    return out;
}

std::optional<FixedPointRecord> gas_check(const DeformedMap& m)
{
    FixedPointRecord zero = classify_zero(m);
    if (is_attracting(zero.classification)) {
        if (!below_diagonal_on_grid(m)) {
            return std::nullopt;
        }
        zero.gas = true;
        return zero;
    }
    for (auto rec : find_nonzero_fixed_points(m)) {
        if (is_attracting(rec.classification)) {
            rec.gas = true;
            return rec;
        }
    }
    return std::nullopt;
}

double curve_r1(double q)
{
    if (!(q > 0.0)) {
        throw DomainError("curve_r1 needs q > 0");
    }
    const double l = std::log(q);
    return l == 0.0 ? 1.0 : std::expm1(l) / l;
}

double curve_r2(double q)
{
    if (!(q > 0.0)) {
        throw DomainError("curve_r2 needs q > 0");
    }
    const double l = std::log(q);
    return l == 0.0 ? 2.0 : 4.0 * std::log1p(0.5 * (q - 1.0)) / l;
}

SpecialConstants solve_special_constants()
{
    SpecialConstants c;
    c.q0 = detail::bisect_root([](double q) { return curve_r1(q) - 4.0; }, 2.0, 50.0, 1e-12, "r1(q) = 4");
    c.q1 = detail::bisect_root([](double q) { return curve_r1(q) - curve_r2(q); }, 2.0, 10.0, 1e-12,
                               "r1(q) = r2(q)");
    return c;
}

AttractorScenario attractor_scenario(const DeformedMap& m)
{
    AttractorScenario sc;
    sc.zero = classify_zero(m);
    sc.nonzero = find_nonzero_fixed_points(m);

    if (is_attracting(sc.zero.classification) && sc.nonzero.size() == 2) {
        const double x1 = sc.nonzero.front().location;
        const double peak = eval_map(m, kTurningPoint);
        if (peak < x1) {
            throw ConvergenceError("critical value below the fixed point x1; preimage bracket is empty");
        }
        // Phi is decreasing on [1/2, 1], so the largest preimage lives there.
        sc.x1_star = detail::bisect_root([&](double x) { return eval_map(m, x) - x1; }, kTurningPoint, 1.0,
                                         1e-13, "largest preimage of x1");
        sc.kind = peak <= *sc.x1_star ? ScenarioKind::COEXIST_INVARIANT : ScenarioKind::COEXIST_ESCAPING;
        return sc;
    }

    const auto gas = locate_gas(m, sc.zero, sc.nonzero);
    if (!gas) {
        sc.kind = ScenarioKind::OTHER;
    } else if (*gas < 0) {
        sc.zero.gas = true;
        sc.kind = ScenarioKind::ZERO_GAS;
    } else {
        sc.nonzero[static_cast<std::size_t>(*gas)].gas = true;
        sc.kind = ScenarioKind::NONZERO_GAS;
    }
    return sc;
}

} // namespace qdl
