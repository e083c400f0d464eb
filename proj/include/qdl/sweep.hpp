#pragma once

#include "qdl/core_maps.hpp"
#include "qdl/entropy.hpp"
#include "qdl/family.hpp"
#include "qdl/grid.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdl {

inline constexpr double kSweepSentinel = -999.0;
inline constexpr double kDefaultPatternR = 3.56;

enum class Quantity {
    ENTROPY,
    LYAPUNOV,
    LYAPUNOV_POSITIVE_MASK, // 1 where the Lyapunov estimate is > 0
    ENTROPY_POSITIVE_MASK,  // 1 where the entropy is > 0
    STABILITY_CODE,         // 0 none, 1 zero attracting, 2 non-zero attracting, 3 both
};

/// Map shapes a sweep can run over.
///
/// SINGLE and Kn use the (r, q) plane with n copies of phi_q. The two-value
/// patterns use the (q1, q2) plane at fixed r and are named outermost
/// deformation first: Q1Q2 is phi_q1 o phi_q2 o f_r, i.e. phi_q2 is applied first.
enum class Pattern { SINGLE, K2, K3, K5, Q1Q2, Q1Q1Q2, Q1Q2Q2, Q1Q2Q1 };

std::string_view to_string(Quantity q);
std::string_view to_string(Pattern p);
// Accept the lower-case CLI spellings ("entropy", "lyapunov-mask", "q1q2", ...).
Quantity parse_quantity(std::string_view s);
Pattern parse_pattern(std::string_view s);

bool is_two_value(Pattern p);
bool is_mask(Quantity q);

// Family in application order with parameters {r, q} or {r, q1, q2}.
MapFamily pattern_family(Pattern p);

struct SweepSpec {
    Pattern pattern = Pattern::SINGLE;
    Quantity quantity = Quantity::ENTROPY;
    Axis axis1; // r for SINGLE/Kn, q1 for two-value patterns
    Axis axis2; // q for SINGLE/Kn, q2 for two-value patterns
    double fixed_r = kDefaultPatternR; // two-value patterns only
    double entropy_tol = kDefaultEntropyTolerance;
    std::size_t kneading_length = kDefaultKneadingLength;
    std::size_t lyapunov_length = 10000;

    // Checks axis names/ranges against the pattern; throws SpecError.
    void validate() const;
};

/// Row-major results: cell (i, j) sits at index i * cols() + j, with i running
/// over axis1 and j over axis2, both ascending.
struct SweepGrid {
    SweepSpec spec;
    std::vector<double> values1;
    std::vector<double> values2;
    std::vector<double> cells;

    std::size_t rows() const { return values1.size(); }
    std::size_t cols() const { return values2.size(); }
    double at(std::size_t i, std::size_t j) const { return cells[i * cols() + j]; }
};

// The map at one grid point.
DeformedMap map_for_cell(const SweepSpec& spec, double v1, double v2);

/// One cell's value; any error while building or evaluating the map gives the
/// sentinel -999. run_sweep produces exactly these values.
double evaluate_cell(const SweepSpec& spec, double v1, double v2);

// Cell code shared with the stability-region sweep; throws on a bad map.
int stability_code(const DeformedMap& m);

/// Evaluates every cell, on up to `threads` workers (0 = all cores). Only spec
/// validation throws; the output does not depend on the thread count.
SweepGrid run_sweep(const SweepSpec& spec, unsigned threads = 0);

// CSV with header `axis1,axis2,value`, 17 significant digits, LF endings.
void export_csv(const SweepGrid& g, std::ostream& os);
void export_csv(const SweepGrid& g, const std::string& path);

/// 1 where value > threshold, 0 otherwise; sentinels are kept. Only ENTROPY and
/// LYAPUNOV grids can be masked (SpecError otherwise).
SweepGrid threshold_mask(const SweepGrid& g, double threshold);

// key=value description of the run: version, spec and tolerances.
void write_manifest(const SweepGrid& g, std::ostream& os);

} // namespace qdl
