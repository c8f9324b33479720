#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "errors.hpp"

namespace germfold {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational coefficients. cpp_rational keeps the canonical form
// (reduced, positive denominator) on every operation.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, unsigned long long e) {
  Rational acc(1);
  Rational b = base;
  while (e > 0) {
    if (e & 1ULL) acc *= b;
    b *= b;
    e >>= 1ULL;
  }
  return acc;
}

inline std::string rational_str(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace germfold
