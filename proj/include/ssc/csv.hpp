#pragma once

#include <string>

namespace ssc {

/// Decimal representation with 17 significant digits.
std::string format_real(double v);

} // namespace ssc
