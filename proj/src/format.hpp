#pragma once

#include <string>

namespace superlase {

/// Shortest decimal string that parses back to the same double; "nan",
/// "inf" and "-inf" for non-finite values.
std::string format_double(double value);

}  // namespace superlase
