#include "core/rational.hpp"

#include <cctype>
#include <ostream>

#include "core/diag.hpp"

namespace fairflow {

Rational::Rational(long n, long d) : value_(n, d) {
  if (d == 0) fail(ErrorCode::Config, "rational with zero denominator");
  value_.canonicalize();
}

Rational::Rational(const mpz_class& n, const mpz_class& d) : value_(n, d) {
  if (d == 0) fail(ErrorCode::Config, "rational with zero denominator");
  value_.canonicalize();
}

Rational Rational::from_int64(std::int64_t n) {
  mpz_class z;
  // mpz_class has no int64 constructor on LP64-ambiguous platforms; go via string.
  z = std::to_string(n);
  return Rational(mpq_class(z));
}

Rational Rational::ratio(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(ErrorCode::Config, "rational with zero denominator");
  mpz_class zn(std::to_string(n)), zd(std::to_string(d));
  mpq_class q(zn, zd);
  q.canonicalize();
  return Rational(q);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) fail(ErrorCode::Config, "rational division by zero");
  return Rational(mpq_class(value_ / o.value_));
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

} // namespace

Rational Rational::parse(const std::string& text) {
  std::string s = text;
  // trim
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) fail(ErrorCode::Config, "empty rational literal");

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.erase(s.begin());
  }

  Rational magnitude;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      fail(ErrorCode::Config, "malformed fraction '" + text + "'");
    }
    mpz_class n(num), d(den);
    if (d == 0) fail(ErrorCode::Config, "fraction with zero denominator '" + text + "'");
    magnitude = Rational(n, d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) {
      fail(ErrorCode::Config, "malformed decimal '" + text + "'");
    }
    mpz_class scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class n = mpz_class(whole) * scale + (frac.empty() ? mpz_class(0) : mpz_class(frac));
    magnitude = Rational(n, scale);
  } else {
    if (!all_digits(s)) fail(ErrorCode::Config, "malformed integer '" + text + "'");
    magnitude = Rational(mpq_class(mpz_class(s)));
  }
  return negative ? -magnitude : magnitude;
}

std::string Rational::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int places) const {
  if (places < 0) places = 0;
  mpz_class num = value_.get_num();
  mpz_class den = value_.get_den();
  bool negative = num < 0;
  if (negative) num = -num;

  mpz_class scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;

  // scaled = num*scale / den, rounded half to even on the remainder.
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), mpz_class(num * scale).get_mpz_t(), den.get_mpz_t());
  mpz_class twice = r * 2;
  if (twice > den || (twice == den && mpz_odd_p(q.get_mpz_t()))) q += 1;

  std::string digits = q.get_str();
  std::string out;
  if (places == 0) {
    out = digits;
  } else {
    if (static_cast<int>(digits.size()) <= places) {
      digits.insert(0, places + 1 - digits.size(), '0');
    }
    out = digits.substr(0, digits.size() - places) + "." + digits.substr(digits.size() - places);
  }
  if (negative && q != 0) out.insert(0, 1, '-');
  return out;
}

const Rational& Rational::zero() {
  static const Rational z(0);
  return z;
}

const Rational& Rational::one() {
  static const Rational o(1);
  return o;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

} // namespace fairflow
