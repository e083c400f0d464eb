#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qdl {

/// A uniform parameter axis min, min+step, min+2*step, ...
///
/// The upper bound is exclusive unless `include_max` is set (a point within
/// 1e-9*step of max counts as equal to it). Grid values are formed as
/// min + i*step, never by accumulation. Every axis carries a map parameter
/// (q or r), so non-positive points are dropped: an axis written as
/// [0,100) with step 0.1 starts at 0.1.
struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;
    bool include_max = false;

    std::vector<double> values() const;
    std::size_t size() const { return values().size(); }

    // Throws SpecError on a non-finite bound, non-positive step or empty range.
    void validate() const;
};

} // namespace qdl
