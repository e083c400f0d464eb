#pragma once

#include "qdl/core_maps.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace qdl {

// Any unimodal self-map of [0,1] with turning point 1/2.
using UnimodalMap = std::function<double(double)>;

enum class Symbol : char { L = 'L', C = 'C', R = 'R' };

/// Itinerary of the critical value. At most one C, and only as the last symbol.
struct KneadingSequence {
    std::vector<Symbol> symbols;
    bool truncated = false; // max_len reached before a C

    std::string str() const;
    static KneadingSequence parse(std::string_view text, bool truncated);
};

enum class Order { LESS, EQUAL, GREATER };

std::string_view to_string(Order o);

// Distance to the turning point below which the critical orbit is taken to hit it.
inline constexpr double kCriticalHitTolerance = 1e-12;

KneadingSequence kneading(const DeformedMap& m, std::size_t max_len);
KneadingSequence kneading(const UnimodalMap& f, std::size_t max_len);

/// Kneading sequence of T_s(x) = s min(x, 1-x), s in (1,2]. Slopes up to sqrt 2
/// are reduced by renormalization (s -> s^2) before any iteration, so the result
/// stays exact for s arbitrarily close to 1. The remaining orbit is read with
/// the same critical-hit tolerance as maps.
KneadingSequence tent_kneading(double s, std::size_t max_len);

/// Unimodal order on itineraries: L < C < R, reversed after an odd number of R's.
/// Sequences that agree up to the shorter length compare EQUAL.
Order kneading_compare(const KneadingSequence& a, const KneadingSequence& b);

enum class EntropyStatus { CONVERGED, ZERO, MAX_LENGTH_TIE };

std::string_view to_string(EntropyStatus s);

struct EntropyResult {
    double value = 0.0; // natural-log units
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    EntropyStatus status = EntropyStatus::CONVERGED;
};

inline constexpr double kDefaultEntropyTolerance = 1e-4;
inline constexpr std::size_t kDefaultKneadingLength = 10000;

/// Topological entropy by bisection on the tent slope s in [1,2]: h >= log s
/// exactly when the map's kneading sequence is not below that of T_s.
///
/// The number of halvings is fixed by `tol` alone (15 for 1e-4), which keeps
/// the log-bracket under 2*tol and the cost per call constant.
EntropyResult entropy_bisection(const DeformedMap& m, double tol = kDefaultEntropyTolerance,
                                std::size_t max_len = kDefaultKneadingLength);
EntropyResult entropy_bisection(const UnimodalMap& f, double tol = kDefaultEntropyTolerance,
                                std::size_t max_len = kDefaultKneadingLength);

inline constexpr int kMaxLapIterate = 25;

/// Lap number of the n-th iterate, 1 + #(turning points of Phi^n), found as the
/// union of Phi^{-i}(1/2) for i < n. Throws ResourceLimitError for n > 25.
std::uint64_t lap_count(const DeformedMap& m, int n);

// c_1, ..., c_n from a single preimage sweep.
std::vector<std::uint64_t> lap_counts(const DeformedMap& m, int n);

// log(c_n / c_{n-1}), n >= 4.
double entropy_lap_estimate(const DeformedMap& m, int n);

} // namespace qdl
