#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "ocf/errors.hpp"

namespace ocf {

// Exact rational edge weight. Always canonical: positive denominator, lowest terms.
class Weight {
 public:
  Weight() = default;

  template <std::integral T>
  Weight(T v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      value_ = static_cast<long>(v);
    } else {
      value_ = static_cast<unsigned long>(v);
    }
  }

  Weight(long num, long den) {
    if (den == 0) throw PreconditionError("weight denominator must be nonzero");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }

  explicit Weight(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }
  explicit Weight(const mpz_class& v) : value_(v) {}
  Weight(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw PreconditionError("weight denominator must be nonzero");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }

  // Accepts "p", "p/q", and decimal or scientific literals such as "-1.25" or "1e-9".
  static Weight parse(std::string_view text);

  // Exact value of the shortest decimal rendering of d, so 0.1 becomes 1/10.
  static Weight from_double(double d);

  static Weight pow(const Weight& base, unsigned exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.value_.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.value_.get_den_mpz_t(), exponent);
    return Weight(num, den);
  }

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  // Canonical "p/q" rendering; the denominator is always printed.
  std::string str() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }
  double to_double() const { return value_.get_d(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_positive() const { return sign() > 0; }
  bool is_negative() const { return sign() < 0; }

  Weight& operator+=(const Weight& o) {
    mpq_add(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Weight& operator-=(const Weight& o) {
    mpq_sub(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Weight& operator*=(const Weight& o) {
    mpq_mul(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Weight& operator/=(const Weight& o) {
    if (o.is_zero()) throw PreconditionError("division by zero weight");
    mpq_div(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Weight& mul_pow2(unsigned k) {
    mpq_mul_2exp(value_.get_mpq_t(), value_.get_mpq_t(), k);
    return *this;
  }

  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(Weight a, const Weight& b) { return a *= b; }
  friend Weight operator/(Weight a, const Weight& b) { return a /= b; }
  friend Weight operator-(Weight a) {
    mpq_neg(a.value_.get_mpq_t(), a.value_.get_mpq_t());
    return a;
  }

  friend bool operator==(const Weight& a, const Weight& b) {
    return mpq_equal(a.value_.get_mpq_t(), b.value_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.str(); }

 private:
  mpq_class value_;
};

namespace detail {

inline mpz_class parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ParseError("empty integer in weight literal '" + std::string(whole) + "'");
  std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (start == s.size()) throw ParseError("bad weight literal '" + std::string(whole) + "'");
  for (std::size_t k = start; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') {
      throw ParseError("bad weight literal '" + std::string(whole) + "'");
    }
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(digits, 10);
}

// Decimal literal with optional fraction and exponent, parsed exactly.
inline mpq_class parse_decimal(std::string_view s, std::string_view whole) {
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view ex = s.substr(e + 1);
    if (!ex.empty() && ex[0] == '+') ex.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(ex.data(), ex.data() + ex.size(), exponent);
    if (ec != std::errc() || ptr != ex.data() + ex.size() || ex.empty()) {
      throw ParseError("bad exponent in weight literal '" + std::string(whole) + "'");
    }
    if (exponent > 100000 || exponent < -100000) {
      throw ParseError("exponent out of range in '" + std::string(whole) + "'");
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw ParseError("bad weight literal '" + std::string(whole) + "'");
    }
  }
  if (digits.empty()) throw ParseError("bad weight literal '" + std::string(whole) + "'");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long scale = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class q = scale < 0 ? mpq_class(num, ten_pow) : mpq_class(num * ten_pow);
  q.canonicalize();
  return q;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline Weight Weight::parse(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError("empty weight literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = detail::parse_integer(detail::trim(s.substr(0, slash)), text);
    mpz_class den = detail::parse_integer(detail::trim(s.substr(slash + 1)), text);
    if (den == 0) throw ParseError("zero denominator in weight literal '" + std::string(text) + "'");
    return Weight(num, den);
  }
  return Weight(detail::parse_decimal(s, text));
}

inline Weight Weight::from_double(double d) {
  if (!std::isfinite(d)) {
    throw ParseError("weight must be a finite number");
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  if (ec != std::errc()) throw ParseError("cannot render weight");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

}  // namespace ocf
