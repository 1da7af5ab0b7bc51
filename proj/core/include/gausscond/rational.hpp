#ifndef GAUSSCOND_RATIONAL_HPP
#define GAUSSCOND_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace gausscond {

/// Arbitrary-precision rational, kept in canonical reduced form with a
/// positive denominator by the backend.
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long num, long long den = 1) { return Rat(num) / Rat(den); }

inline std::string rat_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace gausscond

#endif
