#pragma once

#include <cstdio>
#include <string>

namespace bubble {

/// Round-trip text form of a double (17 significant digits).
inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace bubble
