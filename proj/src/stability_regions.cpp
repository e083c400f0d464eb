#include "qdl/stability_regions.hpp"

#include "bisect.hpp"
#include "parallel.hpp"
#include "qdl/fixed_points.hpp"
#include "qdl/format.hpp"

#include <cmath>
#include <functional>
#include <ostream>

namespace qdl {

namespace {

constexpr const char* kMultiplierCurve = "zero_multiplier_one";
constexpr const char* kCriticalCurve = "critical_value_half";
constexpr double kCurveTolerance = 1e-12;

using CurveFn = std::function<double(const DeformedMap&)>;

double multiplier_minus_one(const DeformedMap& m) { return multiplier_at_zero(m) - 1.0; }
double critical_minus_half(const DeformedMap& m) { return eval_map(m, kTurningPoint) - kTurningPoint; }

bool in_range(double v, const Axis& a)
{
    return v >= a.min && (a.include_max ? v <= a.max : v < a.max);
}

// Roots in the solved variable, found between consecutive grid nodes.
std::vector<double> solve_on_axis(const std::vector<double>& nodes, const std::function<double(double)>& f)
{
    std::vector<double> roots;
    double prev_x = 0.0;
    double prev_f = 0.0;
    bool have_prev = false;
    for (double x : nodes) {
        double fx;
        try {
            fx = f(x);
        } catch (const std::exception&) {
            have_prev = false;
            continue;
        }
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (have_prev && prev_f != 0.0 && (fx < 0.0) != (prev_f < 0.0)) {
            roots.push_back(detail::bisect_root(f, prev_x, x, kCurveTolerance, "boundary curve"));
        }
        prev_x = x;
        prev_f = fx;
        have_prev = true;
    }
    return roots;
}

void single_q_boundary(const SweepSpec& spec, const std::vector<double>& qs, std::vector<BoundaryPoint>& out)
{
    for (const char* curve : {kMultiplierCurve, kCriticalCurve}) {
        for (double q : qs) {
            const double r = curve == kMultiplierCurve ? curve_r1(q) : curve_r2(q);
            if (in_range(r, spec.axis1)) {
                out.push_back({curve, r, q});
            }
        }
    }
}

void numeric_boundary(const SweepSpec& spec, const std::vector<double>& v1, const std::vector<double>& v2,
                      std::vector<BoundaryPoint>& out)
{
    // Kn: fix q (axis2), solve in r (axis1). Two-value: fix q1 (axis1), solve in q2 (axis2).
    const bool solve_axis2 = is_two_value(spec.pattern);
    const auto& fixed_values = solve_axis2 ? v1 : v2;
    const auto& nodes = solve_axis2 ? v2 : v1;
    const std::pair<const char*, CurveFn> curves[] = {{kMultiplierCurve, multiplier_minus_one},
                                                      {kCriticalCurve, critical_minus_half}};
    for (const auto& [name, fn] : curves) {
        for (double fixed : fixed_values) {
            auto f = [&, fixed](double x) {
                return fn(solve_axis2 ? map_for_cell(spec, fixed, x) : map_for_cell(spec, x, fixed));
            };
            for (double root : solve_on_axis(nodes, f)) {
                if (solve_axis2) {
                    out.push_back({name, fixed, root});
                } else {
                    out.push_back({name, root, fixed});
                }
            }
        }
    }
}

} // namespace

StabilityRegions stability_region_sweep(SweepSpec spec, unsigned threads)
{
    spec.quantity = Quantity::STABILITY_CODE;
    spec.validate();

    StabilityRegions res;
    SweepGrid& g = res.grid;
    g.spec = spec;
    g.values1 = spec.axis1.values();
    g.values2 = spec.axis2.values();
    g.cells.assign(g.rows() * g.cols(), kRegionSentinel);
    const std::size_t cols = g.cols();
    detail::parallel_for(g.cells.size(), threads, [&](std::size_t k) {
        try {
            g.cells[k] = stability_code(map_for_cell(spec, g.values1[k / cols], g.values2[k % cols]));
        } catch (const std::exception&) {
            g.cells[k] = kRegionSentinel;
        }
    });

    res.boundary = stability_boundary(spec);
    return res;
}

std::vector<BoundaryPoint> stability_boundary(const SweepSpec& spec)
{
    spec.validate();
    std::vector<BoundaryPoint> out;
    if (spec.pattern == Pattern::SINGLE) {
        single_q_boundary(spec, spec.axis2.values(), out);
    } else {
        numeric_boundary(spec, spec.axis1.values(), spec.axis2.values(), out);
    }
    return out;
}

void write_boundary_csv(const std::vector<BoundaryPoint>& pts, std::ostream& os)
{
    os << "curve,axis1,axis2\n";
    for (const auto& p : pts) {
        os << p.curve << ',' << format_g17(p.axis1) << ',' << format_g17(p.axis2) << '\n';
    }
}

} // namespace qdl
