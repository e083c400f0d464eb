#pragma once

#include "qdl/core_maps.hpp"

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qdl {

using Bindings = std::map<std::string, double, std::less<>>;

/// A parametrised deformed map: every chain link and r is either a number or a
/// named parameter. "q2,q2,3" with r = "r" describes phi_3 o phi_q2 o phi_q2 o f_r
/// (links in application order).
class MapFamily {
public:
    using Slot = std::variant<double, std::string>;

    MapFamily(std::vector<Slot> chain, Slot r);

    // Comma-separated tokens in application order; each token is a positive
    // number or an identifier. An empty template gives the bare logistic map.
    static MapFamily parse(std::string_view chain_template, std::string_view r_token = "r");

    const std::vector<Slot>& chain() const noexcept { return chain_; }
    const Slot& r() const noexcept { return r_; }

    // Distinct parameter names, in first-use order (chain first, then r).
    std::vector<std::string> parameters() const;

    // Throws SpecError when a parameter has no binding.
    DeformedMap bind(const Bindings& values) const;

    std::string describe() const;

private:
    std::vector<Slot> chain_;
    Slot r_;
};

// Parses a comma-separated list of reals ("0.5,2,3"); empty input gives an empty list.
std::vector<double> parse_real_list(std::string_view text);

} // namespace qdl
