#pragma once

#include <string>

namespace powermix {

/// Shortest decimal string that reads back to the same double.
std::string shortest(double x);

/// 17 significant digits, for tabular output.
std::string digits17(double x);

}  // namespace powermix
