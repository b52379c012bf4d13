#pragma once

// Exact rational arithmetic for J-spectra, witness values and certificates.
// PPT boundaries sit exactly at zero, so these are never evaluated in floating
// point.

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pptes {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

// Always "p/q" with q > 0, e.g. "-1/40", "0/1".
inline std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(std::stoll(text));
    }
    const long long num = std::stoll(text.substr(0, slash));
    const long long den = std::stoll(text.substr(slash + 1));
    if (den == 0) throw std::runtime_error("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::runtime_error("bad rational \"" + text + "\"");
  }
}

// 2^k and 3^k as exact integers (k small enough for the lattice sizes we use).
inline long long pow2ll(int k) { return 1LL << k; }

inline long long pow3ll(int k) {
  long long v = 1;
  for (int i = 0; i < k; ++i) v *= 3;
  return v;
}

}  // namespace pptes
