#pragma once

#include <charconv>
#include <string>

namespace okd {

/// Shortest round-trip decimal representation; locale independent.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace okd
