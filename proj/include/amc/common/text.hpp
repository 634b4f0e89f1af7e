#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace amc {

// Shortest decimal text that round-trips to the same value.
template <typename T>
std::string to_text(T value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace amc
