#include "covshift/csv.hpp"

#include <cstdio>

namespace covshift {

std::string format_real(double v) {
    // Avoid "-0" so reruns that only differ in the sign of zero stay identical.
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace covshift
