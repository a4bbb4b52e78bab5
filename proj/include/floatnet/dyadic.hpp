#pragma once

#include <cstdint>
#include <string>

#include "floatnet/bigint.hpp"
#include "floatnet/errors.hpp"

namespace floatnet {

// Exact dyadic rational sign * mag * 2^exp2 in lowest terms: mag is odd
// whenever the value is nonzero, and sign == 0 iff mag == 0. This is the
// carrier for every pre-rounding result, so arithmetic here is exact by
// construction.
struct Dyadic {
  int sign = 0;  // -1, 0, +1
  BigUint mag;
  int64_t exp2 = 0;

  Dyadic() = default;
  Dyadic(int s, BigUint m, int64_t k) : sign(s), mag(std::move(m)), exp2(k) { normalize(); }

  static Dyadic from_int(int64_t v) {
    if (v == 0) return Dyadic();
    uint64_t mag = v < 0 ? (~static_cast<uint64_t>(v) + 1) : static_cast<uint64_t>(v);
    return Dyadic(v < 0 ? -1 : 1, BigUint(mag), 0);
  }

  static Dyadic scaled_pow2(int64_t n, int64_t k) {
    Dyadic d = from_int(n);
    if (d.sign != 0) d.exp2 += k;
    return d;
  }

  bool is_zero() const { return sign == 0; }

  void normalize() {
    if (mag.is_zero()) {
      sign = 0;
      exp2 = 0;
      return;
    }
    size_t tz = mag.trailing_zeros();
    if (tz > 0) {
      mag = mag.shr(tz);
      exp2 += static_cast<int64_t>(tz);
    }
  }

  Dyadic negated() const {
    Dyadic r = *this;
    r.sign = -r.sign;
    return r;
  }

  // floor(log2 |x|) for nonzero x.
  int64_t mag_exponent() const {
    if (is_zero()) throw DomainError("mag_exponent of zero");
    return exp2 + static_cast<int64_t>(mag.bit_length()) - 1;
  }

  static Dyadic add(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int64_t k = std::min(a.exp2, b.exp2);
    BigUint am = a.mag.shl(static_cast<uint64_t>(a.exp2 - k));
    BigUint bm = b.mag.shl(static_cast<uint64_t>(b.exp2 - k));
    if (a.sign == b.sign) return Dyadic(a.sign, BigUint::add(am, bm), k);
    int c = BigUint::compare(am, bm);
    if (c == 0) return Dyadic();
    if (c > 0) return Dyadic(a.sign, BigUint::sub(am, bm), k);
    return Dyadic(b.sign, BigUint::sub(bm, am), k);
  }

  static Dyadic sub(const Dyadic& a, const Dyadic& b) { return add(a, b.negated()); }

  static Dyadic mul(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero() || b.is_zero()) return Dyadic();
    return Dyadic(a.sign * b.sign, BigUint::mul(a.mag, b.mag), a.exp2 + b.exp2);
  }

  static int compare(const Dyadic& a, const Dyadic& b) {
    if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
    if (a.sign == 0) return 0;
    Dyadic d = sub(a, b);
    return d.sign;
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return compare(a, b) == 0; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }

  Dyadic abs() const {
    Dyadic r = *this;
    if (r.sign < 0) r.sign = 1;
    return r;
  }

  // Debug/report rendering: "m * 2^k" in lowest terms.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s = sign < 0 ? "-" : "";
    s += mag.to_decimal();
    s += " * 2^";
    s += std::to_string(exp2);
    return s;
  }
};

}  // namespace floatnet
