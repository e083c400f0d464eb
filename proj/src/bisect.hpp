#pragma once

#include "qdl/errors.hpp"

#include <string>

namespace qdl::detail {

inline constexpr int kMaxBisectionSteps = 200;

// Root of f in [lo, hi] given f(lo) and f(hi) of opposite strict sign (or one of
// them zero). Halves until hi - lo <= tol and returns the midpoint.
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol, const char* what)
{
    double flo = f(lo);
    if (flo == 0.0) {
        return lo;
    }
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
        if (hi - lo <= tol) {
            return 0.5 * (lo + hi);
        }
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            return mid; // bracket at floating-point resolution
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    throw ConvergenceError(std::string("bisection did not converge: ") + what);
}

} // namespace qdl::detail
