#pragma once

#include <string>

namespace covshift {

/// Ten significant digits, the precision of every CSV artifact.
std::string format_real(double v);

inline const char* format_bool(bool b) { return b ? "true" : "false"; }

} // namespace covshift
