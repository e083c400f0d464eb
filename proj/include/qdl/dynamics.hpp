#pragma once

#include "qdl/core_maps.hpp"
#include "qdl/family.hpp"
#include "qdl/grid.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdl {

inline constexpr double kOrbitClamp = 1e-15;
inline constexpr std::size_t kDefaultOrbitLength = 10000;
inline constexpr std::size_t kDefaultTailLength = 100;
inline constexpr double kDefaultBifurcationStart = 0.45;
inline constexpr std::size_t kDefaultLyapunovLength = 10000;

/// (x_1, ..., x_n) with x_{i+1} = Phi(x_i): the starting point itself is not
/// included. Values within 1e-15 of 0 or 1 are snapped onto the boundary.
std::vector<double> orbit(const DeformedMap& m, double x0, std::size_t n);

/// Average of log|Phi'(x_i)| for i = 1..n along the orbit of the turning point.
/// Returns -infinity as soon as a derivative falls below 1e-300 in magnitude
/// (superstable orbit). Requires n >= 100.
double lyapunov_turning(const DeformedMap& m, std::size_t n = kDefaultLyapunovLength);

struct BifurcationDataset {
    std::string parameter;
    std::vector<double> parameter_values;
    std::vector<std::vector<double>> tails; // one per parameter value
    std::size_t orbit_length = kDefaultOrbitLength;
    std::size_t tail_length = kDefaultTailLength;
    double x0 = kDefaultBifurcationStart;
};

struct BifurcationSpec {
    MapFamily family = MapFamily::parse("q");
    Axis axis;          // swept parameter; name must be a family parameter
    Bindings fixed;     // remaining parameters
    double x0 = kDefaultBifurcationStart;
    std::size_t orbit_length = kDefaultOrbitLength;
    std::size_t tail_length = kDefaultTailLength;
};

/// Keeps the last `tail_length` points of an orbit of `orbit_length` for every
/// value on the axis. A map that cannot be built aborts the scan with a
/// DomainError naming the offending parameter value. `threads` = 0 uses all cores;
/// the result does not depend on it.
BifurcationDataset bifurcation_scan(const BifurcationSpec& spec, unsigned threads = 0);

// CSV with header `param,iterate_index,x`; iterate_index counts from 1 along the
// full orbit, so a tail of 100 out of 10000 carries indices 9901..10000.
void write_bifurcation_csv(const BifurcationDataset& d, std::ostream& os);

} // namespace qdl
