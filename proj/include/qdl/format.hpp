#pragma once

#include <string>

namespace qdl {

// Round-trippable text for a double ("%.17g"); infinities print as inf / -inf.
std::string format_g17(double v);

// Six significant digits, for human-readable summaries.
std::string format_g6(double v);

} // namespace qdl
