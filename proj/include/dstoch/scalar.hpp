#pragma once

// The two scalar realizations behind one contract: exact rationals and
// IEEE doubles. Everything above this header is generic over the scalar,
// selected by scalar_traits<S>::is_exact.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "rational.hpp"

namespace dstoch {

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_long(long v) { return Rational(v); }
  static Rational parse(std::string_view text) { return Rational::parse(text); }
  static std::string to_text(const Rational& v) { return v.str(); }
  static double to_double(const Rational& v) { return v.to_double(); }
  /// Stochasticity checks on the exact backend are exact equality.
  static Rational default_tolerance() { return Rational(0); }
  static bool is_finite(const Rational&) { return true; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_long(long v) { return static_cast<double>(v); }
  // One grammar for both backends: parse exactly, then round once.
  static double parse(std::string_view text) { return Rational::parse(text).to_double(); }
  static std::string to_text(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  static double to_double(double v) { return v; }
  static double default_tolerance() { return 1e-12; }
  static bool is_finite(double v) { return std::isfinite(v); }
};

inline Rational abs_value(const Rational& x) { return x.abs(); }
inline double abs_value(double x) { return std::fabs(x); }

template <class S>
concept ScalarType = requires { scalar_traits<S>::is_exact; };

} // namespace dstoch
