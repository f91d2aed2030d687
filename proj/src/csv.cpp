#include "ssc/csv.hpp"

#include <cstdio>

namespace ssc {

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace ssc
