#pragma once

#include <charconv>
#include <string>

namespace pmin::detail {

// Shortest round-trip decimal form of a double.
inline std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace pmin::detail
