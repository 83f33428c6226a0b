#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pointless {

/// Exact integer used for point counts and L-polynomial coefficients.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt ipow(const BigInt& base, std::uint64_t e) {
  BigInt result = 1;
  BigInt b = base;
  while (e != 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace pointless
