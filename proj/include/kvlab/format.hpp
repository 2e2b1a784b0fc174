#pragma once

#include <string>

namespace kvlab {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace kvlab
