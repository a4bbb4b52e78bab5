#pragma once

// Test-only oracles, kept independent of the library's rounding path: the
// nearest float is found by scanning floor/ceil candidates at every exponent
// with exact rational comparisons, and ties are resolved by the even
// significand directly.
#include <optional>
#include <vector>

#include "floatnet/format.hpp"
#include "floatnet/rational.hpp"
#include "floatnet/value.hpp"

namespace floatnet::testing {

inline Rational pow2_rational(int64_t e) {
  if (e >= 0) return Rational(1, BigUint::pow2(static_cast<uint64_t>(e)), BigUint(1));
  return Rational(1, BigUint(1), BigUint::pow2(static_cast<uint64_t>(-e)));
}

inline Rational float_value_rational(const Format& f, const Float& v) {
  if (v.sig == 0) return Rational();
  Rational mag = Rational::mul(Rational(1, BigUint(v.sig), BigUint(1)),
                               pow2_rational(v.exp - f.p));
  return v.sign < 0 ? mag.negated() : mag;
}

// floor(|x| / 2^{e-p}) as an integer, clipped to [0, 2^{p+1}+1].
inline uint64_t floor_scaled(const Format& f, const Rational& absx, int64_t e) {
  Rational scaled = Rational::mul(absx, pow2_rational(f.p - e));
  BigUint q, r;
  BigUint::divmod(scaled.num, scaled.den, q, r);
  uint64_t cap = (uint64_t(2) << f.p) + 1;
  if (q.bit_length() > 63) return cap;
  uint64_t v = q.to_u64();
  return v > cap ? cap : v;
}

// Nearest value of f to x under round-to-nearest, ties to even; Fpq maps
// |x| >= Omega' to +-infinity (Omega' computed here from the definitions).
inline Float round_oracle(const Format& f, const Rational& x) {
  if (x.is_zero()) return make_zero(+1);
  Rational absx = x.abs();
  int sign = x.sign;
  if (f.kind == Kind::Fpq) {
    Rational omega = Rational::mul(
        Rational::sub(Rational::from_int(2), pow2_rational(-f.p)), pow2_rational(f.e_max));
    Rational omega_prime = Rational::add(omega, pow2_rational(f.e_max - f.p - 1));
    if (Rational::compare(absx, omega_prime) >= 0) return make_inf(sign);
  }
  // Candidate exponents around the magnitude of x.
  int64_t e_lo, e_hi;
  if (f.kind == Kind::Fpq) {
    e_lo = f.e_min;
    e_hi = f.e_max;
  } else {
    // Find E with 2^E <= |x| < 2^{E+1} by doubling/halving comparisons.
    int64_t E = 0;
    if (Rational::compare(absx, Rational::from_int(1)) >= 0) {
      while (Rational::compare(absx, pow2_rational(E + 1)) >= 0) ++E;
    } else {
      while (Rational::compare(absx, pow2_rational(E)) < 0) --E;
    }
    e_lo = E - 1;
    e_hi = E + 1;
  }
  std::optional<Float> best;
  std::optional<Rational> best_err;
  bool best_even = false;
  auto consider = [&](uint64_t m, int64_t e) {
    uint64_t m_cap = (uint64_t(2) << f.p) - 1;
    if (f.kind == Kind::Fp) {
      if (m != 0 && (m < (uint64_t(1) << f.p) || m > m_cap)) return;
    } else {
      if (e == f.e_min) {
        if (m > m_cap) return;
      } else {
        if (m != 0 && (m < (uint64_t(1) << f.p) || m > m_cap)) return;
      }
    }
    Float v = m == 0 ? make_zero(+1) : make_finite(sign, m, e);
    Rational err = Rational::sub(float_value_rational(f, abs_value(v)), absx).abs();
    bool even = (m & 1) == 0;
    if (!best_err || Rational::compare(err, *best_err) < 0 ||
        (Rational::compare(err, *best_err) == 0 && even && !best_even)) {
      best_err = err;
      best = v;
      best_even = even;
    }
  };
  for (int64_t e = e_lo; e <= e_hi; ++e) {
    uint64_t fl = floor_scaled(f, absx, e);
    consider(fl, e);
    consider(fl + 1, e);
  }
  if (f.kind == Kind::Fpq) consider(0, f.e_min);
  if (!best) throw DomainError("oracle found no candidate");
  if (best->sig == 0) {
    // keep the sign of the original value on underflow-to-zero
    return make_zero(sign);
  }
  return *best;
}

inline Float round_oracle_dyadic(const Format& f, const Dyadic& d) {
  return round_oracle(f, Rational::from_dyadic(d));
}

}  // namespace floatnet::testing
