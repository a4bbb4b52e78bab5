#pragma once

#include <cstdint>
#include <string>

#include "floatnet/bigint.hpp"
#include "floatnet/dyadic.hpp"
#include "floatnet/errors.hpp"

namespace floatnet {

// Exact rational sign * num / den in lowest terms (den >= 1). Used for target
// functions, grid boundaries and bound checks, where denominators need not be
// powers of two.
struct Rational {
  int sign = 0;
  BigUint num;
  BigUint den{1};

  Rational() = default;
  Rational(int s, BigUint n, BigUint d) : sign(s), num(std::move(n)), den(std::move(d)) {
    normalize();
  }

  static Rational from_int(int64_t v) {
    Dyadic d = Dyadic::from_int(v);
    return from_dyadic(d);
  }

  static Rational from_dyadic(const Dyadic& d) {
    Rational r;
    if (d.is_zero()) return r;
    r.sign = d.sign;
    if (d.exp2 >= 0) {
      r.num = d.mag.shl(static_cast<uint64_t>(d.exp2));
      r.den = BigUint(1);
    } else {
      r.num = d.mag;
      r.den = BigUint::pow2(static_cast<uint64_t>(-d.exp2));
    }
    return r;
  }

  bool is_zero() const { return sign == 0; }

  void normalize() {
    if (num.is_zero()) {
      sign = 0;
      num = BigUint();
      den = BigUint(1);
      return;
    }
    if (den.is_zero()) throw DomainError("rational with zero denominator");
    BigUint g = BigUint::gcd(num, den);
    if (!(g == BigUint(1))) {
      BigUint q, r;
      BigUint::divmod(num, g, q, r);
      num = q;
      BigUint::divmod(den, g, q, r);
      den = q;
    }
  }

  Rational negated() const {
    Rational r = *this;
    r.sign = -r.sign;
    return r;
  }

  Rational abs() const {
    Rational r = *this;
    if (r.sign < 0) r.sign = 1;
    return r;
  }

  static Rational add(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    BigUint an = BigUint::mul(a.num, b.den);
    BigUint bn = BigUint::mul(b.num, a.den);
    BigUint d = BigUint::mul(a.den, b.den);
    if (a.sign == b.sign) return Rational(a.sign, BigUint::add(an, bn), d);
    int c = BigUint::compare(an, bn);
    if (c == 0) return Rational();
    if (c > 0) return Rational(a.sign, BigUint::sub(an, bn), d);
    return Rational(b.sign, BigUint::sub(bn, an), d);
  }

  static Rational sub(const Rational& a, const Rational& b) { return add(a, b.negated()); }

  static Rational mul(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero()) return Rational();
    return Rational(a.sign * b.sign, BigUint::mul(a.num, b.num), BigUint::mul(a.den, b.den));
  }

  static Rational div(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DomainError("rational division by zero");
    if (a.is_zero()) return Rational();
    return Rational(a.sign * b.sign, BigUint::mul(a.num, b.den), BigUint::mul(a.den, b.num));
  }

  static int compare(const Rational& a, const Rational& b) {
    if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
    if (a.sign == 0) return 0;
    int c = BigUint::compare(BigUint::mul(a.num, b.den), BigUint::mul(b.num, a.den));
    return a.sign > 0 ? c : -c;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }

  bool is_dyadic() const {
    if (is_zero()) return true;
    return den.bit_length() - 1 == den.trailing_zeros();
  }

  Dyadic to_dyadic() const {
    if (is_zero()) return Dyadic();
    if (!is_dyadic()) throw DomainError("rational is not dyadic: " + to_string());
    return Dyadic(sign, num, -static_cast<int64_t>(den.trailing_zeros()));
  }

  // Integer or decimal literal, optionally signed: "2", "-0.125", ".5".
  static Rational from_decimal(const std::string& s) {
    if (s.empty()) throw ParseError("empty number");
    size_t i = 0;
    int sg = 1;
    if (s[i] == '+' || s[i] == '-') {
      sg = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::string intpart, fracpart;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') intpart.push_back(s[i++]);
    if (i < s.size() && s[i] == '.') {
      ++i;
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') fracpart.push_back(s[i++]);
    }
    if (i != s.size() || (intpart.empty() && fracpart.empty()))
      throw ParseError("bad number '" + s + "'");
    BigUint n = BigUint::from_decimal(intpart.empty() ? "0" : intpart);
    BigUint d(1);
    for (char c : fracpart) {
      n = BigUint::add(BigUint::mul(n, BigUint(10)), BigUint(static_cast<uint64_t>(c - '0')));
      d = BigUint::mul(d, BigUint(10));
    }
    if (n.is_zero()) return Rational();
    return Rational(sg, n, d);
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s = sign < 0 ? "-" : "";
    s += num.to_decimal();
    if (!(den == BigUint(1))) {
      s += "/";
      s += den.to_decimal();
    }
    return s;
  }
};

}  // namespace floatnet
