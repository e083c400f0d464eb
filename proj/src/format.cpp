#include "qdl/format.hpp"

#include <cmath>
#include <cstdio>

namespace qdl {

namespace {

std::string format_with(const char* spec, double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string format_g17(double v) { return format_with("%.17g", v); }

std::string format_g6(double v) { return format_with("%.6g", v); }

} // namespace qdl
