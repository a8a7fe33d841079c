#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace locsys {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt ipow(const BigInt& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

inline BigInt ipow(std::int64_t base, unsigned exp) {
  return boost::multiprecision::pow(BigInt(base), exp);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const BigRational& v) {
  if (boost::multiprecision::denominator(v) == 1) {
    return boost::multiprecision::numerator(v).str();
  }
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

inline bool is_integral(const BigRational& v) {
  return boost::multiprecision::denominator(v) == 1;
}

/// Converts an exact rational to an integer, throwing with `what` when a
/// denominator survives.
inline BigInt require_integer(const BigRational& v, const std::string& what) {
  if (!is_integral(v)) {
    throw std::runtime_error(what + ": non-integral value " + to_string(v));
  }
  return boost::multiprecision::numerator(v);
}

/// p-adic valuation of a nonzero integer.
inline int valuation(BigInt v, unsigned p) {
  if (v == 0) throw std::invalid_argument("valuation of zero");
  if (v < 0) v = -v;
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

}  // namespace locsys
