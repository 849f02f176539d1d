#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace fairflow {

// Exact rational arithmetic for all probability computation. Values are kept
// in lowest terms with a positive denominator (GMP canonical form). Floats
// never enter metric computation; `to_decimal` exists only for rendering.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : value_(n) {} // NOLINT(google-explicit-constructor)
  Rational(long n, long d);
  explicit Rational(const mpz_class& n, const mpz_class& d);

  static Rational from_int64(std::int64_t n);
  static Rational ratio(std::int64_t n, std::int64_t d);

  // Accepts "7", "-3/10", "0.25" (finite decimal expansions only).
  static Rational parse(const std::string& text);

  Rational operator+(const Rational& o) const { return Rational(value_ + o.value_); }
  Rational operator-(const Rational& o) const { return Rational(value_ - o.value_); }
  Rational operator*(const Rational& o) const { return Rational(value_ * o.value_); }
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-value_); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }

  bool operator==(const Rational& o) const { return value_ == o.value_; }
  bool operator!=(const Rational& o) const { return value_ != o.value_; }
  bool operator<(const Rational& o) const { return value_ < o.value_; }
  bool operator<=(const Rational& o) const { return value_ <= o.value_; }
  bool operator>(const Rational& o) const { return value_ > o.value_; }
  bool operator>=(const Rational& o) const { return value_ >= o.value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_negative() const { return sgn(value_) < 0; }
  Rational abs() const { return Rational(::abs(value_)); }

  std::string numerator() const { return value_.get_num().get_str(); }
  std::string denominator() const { return value_.get_den().get_str(); }
  bool is_integer() const { return value_.get_den() == 1; }

  // "3/25", or "7" when the denominator is 1.
  std::string to_string() const;

  // Correctly rounded fixed-point rendering with `places` fraction digits
  // (round half to even), e.g. (112/490).to_decimal(2) == "0.23".
  std::string to_decimal(int places) const;

  static const Rational& zero();
  static const Rational& one();

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) {}
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace fairflow
