#pragma once

// Exact rational scalar backed by GMP. Values are kept in canonical form
// (denominator > 0, gcd(|num|, den) = 1) after every operation, so equality
// is plain value equality and arithmetic is lossless.

#include <gmpxx.h>

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "error.hpp"

namespace dstoch {

class Rational {
public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {} // NOLINT: implicit by design, mirrors integer literals

  Rational(long num, long den) {
    if (den == 0) fail(errc::zero_denominator, "rational denominator must be nonzero");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses `[-]?digits`, `[-]?digits/digits` or `[-]?digits.digits`.
  /// Decimals are read as exact decimal fractions ("0.375" -> 3/8).
  static Rational parse(std::string_view text);

  /// Canonical literal: "p" when the denominator is 1, else "p/q".
  std::string str() const { return q_.get_str(); }

  double to_double() const { return q_.get_d(); }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }

  Rational abs() const { return Rational(mpq_class(::abs(q_)), canonical_tag{}); }

  /// Larger of the numerator/denominator sizes in bits; drives the growth
  /// guard in the scaling engine.
  std::size_t bit_size() const {
    std::size_t nb = mpz_sizeinbase(q_.get_num_mpz_t(), 2);
    std::size_t db = mpz_sizeinbase(q_.get_den_mpz_t(), 2);
    return nb > db ? nb : db;
  }

  const mpq_class& value() const { return q_; }

  friend Rational operator-(const Rational& a) {
    return Rational(mpq_class(-a.q_), canonical_tag{});
  }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ + b.q_), canonical_tag{});
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ - b.q_), canonical_tag{});
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ * b.q_), canonical_tag{});
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(errc::division_by_zero, "rational division by zero");
    return Rational(mpq_class(a.q_ / b.q_), canonical_tag{});
  }

  Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
  Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
  Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }
  Rational& operator/=(const Rational& b) {
    if (b.is_zero()) fail(errc::division_by_zero, "rational division by zero");
    q_ /= b.q_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.q_.get_str();
  }

private:
  struct canonical_tag {};
  // GMP arithmetic yields canonical results from canonical operands.
  Rational(mpq_class q, canonical_tag) : q_(std::move(q)) {}

  mpq_class q_;
};

inline Rational Rational::parse(std::string_view text) {
  auto bad = [&]() -> void {
    fail(errc::parse_error, "malformed scalar literal: '" + std::string(text) + "'");
  };
  const std::size_t n = text.size();
  std::size_t i = 0;
  bool neg = false;
  if (i < n && text[i] == '-') {
    neg = true;
    ++i;
  }
  const std::size_t first = i;
  while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == first) bad();
  const std::string head(text.substr(first, i - first));

  mpq_class q;
  if (i == n) {
    q = mpq_class(mpz_class(head));
  } else if (text[i] == '/') {
    ++i;
    const std::size_t d0 = i;
    while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == d0 || i != n) bad();
    mpz_class den(std::string(text.substr(d0, i - d0)));
    if (den == 0)
      fail(errc::zero_denominator, "zero denominator in '" + std::string(text) + "'");
    q = mpq_class(mpz_class(head), den);
    q.canonicalize();
  } else if (text[i] == '.') {
    ++i;
    const std::size_t f0 = i;
    while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == f0 || i != n) bad();
    const std::string frac(text.substr(f0, i - f0));
    // int.frac == (int · 10^k + frac) / 10^k; string concatenation is that product.
    mpz_class num(head + frac);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac.size()));
    q = mpq_class(num, den);
    q.canonicalize();
  } else {
    bad();
  }
  if (neg) q = -q;
  return Rational(std::move(q), canonical_tag{});
}

} // namespace dstoch
