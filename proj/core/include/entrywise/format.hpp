#pragma once

#include <string>

namespace entrywise {

// Shortest round-trip decimal form, '.' separator, independent of locale.
// Infinities print as "inf"/"-inf" and NaN as "nan".
std::string format_double(double value);

}  // namespace entrywise
