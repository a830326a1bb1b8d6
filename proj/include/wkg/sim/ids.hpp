#pragma once

#include <cstdio>
#include <string>

namespace wkg::sim {

// "AGV_", 4 -> "AGV_04"
inline std::string indexed_id(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, index);
  return buf;
}

// 0 -> "A", 25 -> "Z", 26 -> "AA"
inline std::string block_label(int index) {
  std::string out;
  int n = index + 1;
  while (n > 0) {
    int rem = (n - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    n = (n - 1) / 26;
  }
  return out;
}

// Zero-padded package id; ids sort lexicographically in creation order.
inline std::string package_id(int index, int width = 4) {
  std::string digits = std::to_string(index);
  if (digits.size() < static_cast<std::size_t>(width))
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return "PKG_" + digits;
}

}  // namespace wkg::sim
