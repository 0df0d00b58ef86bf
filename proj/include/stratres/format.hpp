#pragma once

#include <string>

namespace stratres {

/// Shortest locale-independent text with 17 significant digits.
std::string format_double(double v);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace stratres
