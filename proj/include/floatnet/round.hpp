#pragma once

#include <cstdint>
#include <optional>

#include "floatnet/dyadic.hpp"
#include "floatnet/errors.hpp"
#include "floatnet/format.hpp"
#include "floatnet/rational.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

namespace detail {

// Round-to-nearest-even of mag / 2^shift for a 128-bit magnitude.
// Sets inexact when dropped bits were nonzero.
inline unsigned __int128 rne_shift_u128(unsigned __int128 mag, int64_t shift, bool* inexact) {
  if (shift <= 0) return mag << (-shift);
  if (shift >= 128) {
    *inexact = mag != 0;
    if (shift == 128 && mag > (static_cast<unsigned __int128>(1) << 127)) return 1;
    return 0;  // below or at the halfway point, and the tie quotient 0 is even
  }
  unsigned __int128 q = mag >> shift;
  unsigned __int128 rem = mag - (q << shift);
  if (rem != 0) *inexact = true;
  unsigned __int128 half = static_cast<unsigned __int128>(1) << (shift - 1);
  if (rem > half || (rem == half && (q & 1))) ++q;
  return q;
}

inline BigUint rne_shift_big(const BigUint& mag, uint64_t shift, bool* inexact) {
  if (shift == 0) return mag;
  BigUint q = mag.shr(shift);
  bool any = mag.any_low_bits(shift);
  if (any) *inexact = true;
  bool half_set = mag.bit(shift - 1);
  bool below_half = shift >= 2 && mag.any_low_bits(shift - 1);
  if (half_set && (below_half || q.bit(0))) q = BigUint::add(q, BigUint(1));
  return q;
}

}  // namespace detail

// Round sign * mag * 2^k to the nearest value of f (ties to even). Total:
// Fpq overflows to +-inf at |x| >= Omega'; Fp never overflows or underflows.
inline Float round_scaled_u128(const Format& f, int sign, unsigned __int128 mag, int64_t k,
                               bool* inexact = nullptr) {
  bool inx = false;
  if (mag == 0) return make_zero(sign);
  uint64_t hi_limb = static_cast<uint64_t>(mag >> 64);
  int top = hi_limb ? 127 - __builtin_clzll(hi_limb)
                    : 63 - __builtin_clzll(static_cast<uint64_t>(mag));
  int64_t E = k + top;
  int64_t e = E;
  if (f.kind == Kind::Fpq) {
    if (E > f.e_max) {
      if (inexact) *inexact = true;
      return make_inf(sign);
    }
    if (E < f.e_min) e = f.e_min;
  }
  int64_t shift = (e - f.p) - k;
  unsigned __int128 m = detail::rne_shift_u128(mag, shift, &inx);
  if (m == (static_cast<unsigned __int128>(2) << f.p)) {
    m = static_cast<unsigned __int128>(1) << f.p;
    e += 1;
  }
  if (f.kind == Kind::Fpq && e > f.e_max) {
    if (inexact) *inexact = true;
    return make_inf(sign);
  }
  if (inexact) *inexact = inx;
  return make_finite(sign, static_cast<uint64_t>(m), e);
}

inline Float round_dyadic(const Format& f, const Dyadic& x, bool* inexact = nullptr) {
  if (x.is_zero()) {
    if (inexact) *inexact = false;
    return make_zero(+1);
  }
  if (x.mag.fits_u128()) {
    unsigned __int128 mag = x.mag.to_u128();
    if (!((mag >> 127) & 1)) return round_scaled_u128(f, x.sign, mag, x.exp2, inexact);
  }
  bool inx = false;
  int64_t E = x.mag_exponent();
  int64_t e = E;
  if (f.kind == Kind::Fpq) {
    if (E > f.e_max) {
      if (inexact) *inexact = true;
      return make_inf(x.sign);
    }
    if (E < f.e_min) e = f.e_min;
  }
  int64_t shift = (e - f.p) - x.exp2;
  BigUint m;
  if (shift <= 0) {
    m = x.mag.shl(static_cast<uint64_t>(-shift));
  } else {
    m = detail::rne_shift_big(x.mag, static_cast<uint64_t>(shift), &inx);
  }
  if (m == BigUint::pow2(static_cast<uint64_t>(f.p + 1))) {
    m = BigUint::pow2(static_cast<uint64_t>(f.p));
    e += 1;
  }
  if (f.kind == Kind::Fpq && e > f.e_max) {
    if (inexact) *inexact = true;
    return make_inf(x.sign);
  }
  if (inexact) *inexact = inx;
  return make_finite(x.sign, m.to_u64(), e);
}

// Round an arbitrary exact rational (nearest, ties to even).
inline Float round_rational(const Format& f, const Rational& x) {
  if (x.is_zero()) return make_zero(+1);
  if (x.is_dyadic()) return round_dyadic(f, x.to_dyadic());
  // Magnitude exponent E with 2^E <= |x| < 2^{E+1}.
  int64_t E = static_cast<int64_t>(x.num.bit_length()) - static_cast<int64_t>(x.den.bit_length());
  {
    // a/b >= 2^E  <=>  a >= b * 2^E.
    BigUint lhs = E >= 0 ? x.num : x.num.shl(static_cast<uint64_t>(-E));
    BigUint rhs = E >= 0 ? x.den.shl(static_cast<uint64_t>(E)) : x.den;
    if (BigUint::compare(lhs, rhs) < 0) E -= 1;
  }
  int64_t e = E;
  if (f.kind == Kind::Fpq) {
    if (E > f.e_max) return make_inf(x.sign);
    if (E < f.e_min) e = f.e_min;
  }
  // m = RNE(|x| / 2^{e-p}) = RNE(num * 2^{p-e} / den).
  int64_t s = f.p - e;
  BigUint num = s >= 0 ? x.num.shl(static_cast<uint64_t>(s)) : x.num;
  BigUint den = s >= 0 ? x.den : x.den.shl(static_cast<uint64_t>(-s));
  BigUint q, r;
  BigUint::divmod(num, den, q, r);
  BigUint twice_r = r.shl(1);
  int c = BigUint::compare(twice_r, den);
  if (c > 0 || (c == 0 && q.bit(0))) q = BigUint::add(q, BigUint(1));
  if (q == BigUint::pow2(static_cast<uint64_t>(f.p + 1))) {
    q = BigUint::pow2(static_cast<uint64_t>(f.p));
    e += 1;
  }
  if (f.kind == Kind::Fpq && e > f.e_max) return make_inf(x.sign);
  return make_finite(x.sign, q.to_u64(), e);
}

// ulp at a nonzero finite value: 2^{e-p} with e the canonical exponent.
inline Dyadic ulp(const Format& f, const Float& x) {
  if (!x.is_finite() || x.sig == 0) throw DomainError("ulp of zero or special");
  return Dyadic::scaled_pow2(1, x.exp - f.p);
}

// Next representable value above x, if any. Fp: succ(0) does not exist.
// Fpq: succ(Omega) does not exist; succ(-eta) is +0; succ(0) is eta.
inline std::optional<Float> succ(const Format& f, const Float& x) {
  if (!x.is_finite()) throw DomainError("succ of non-finite value");
  uint64_t lo = uint64_t(1) << f.p, hi = (uint64_t(2) << f.p) - 1;
  if (f.kind == Kind::Fp) {
    if (x.sig == 0) return std::nullopt;
    if (x.sign > 0) {
      if (x.sig == hi) return make_finite(1, lo, x.exp + 1);
      return make_finite(1, x.sig + 1, x.exp);
    }
    if (x.sig == lo) return make_finite(-1, hi, x.exp - 1);
    return make_finite(-1, x.sig - 1, x.exp);
  }
  if (x.sig == 0) return make_finite(1, 1, f.e_min);
  if (x.sign > 0) {
    if (x.exp == f.e_max && x.sig == hi) return std::nullopt;
    if (x.sig == hi) return make_finite(1, lo, x.exp + 1);
    return make_finite(1, x.sig + 1, x.exp);
  }
  if (x.exp == f.e_min) {
    if (x.sig == 1) return make_zero(+1);
    return make_finite(-1, x.sig - 1, x.exp);
  }
  if (x.sig == lo) return make_finite(-1, hi, x.exp - 1);
  return make_finite(-1, x.sig - 1, x.exp);
}

inline std::optional<Float> pred(const Format& f, const Float& x) {
  auto s = succ(f, neg(x));
  if (!s) return std::nullopt;
  return neg(*s);
}

namespace detail {

// Largest float <= r (r >= 0). Requires r <= Omega for Fpq.
inline Float float_floor_nonneg(const Format& f, const Rational& r) {
  if (r.sign < 0) throw DomainError("float_floor_nonneg on negative value");
  if (r.is_zero()) return make_zero(+1);
  Float v = round_rational(f, r);
  if (v.is_inf()) throw DomainError("value exceeds finite range");
  Rational rv = to_rational(f, v);
  if (Rational::compare(rv, r) <= 0) return v;
  auto p = pred(f, v);
  if (!p) throw DomainError("no float below value");
  return *p;
}

}  // namespace detail

// Directed boundary roundings used by grid construction: the float forms of
// x^{(>=,F)}, x^{(<,F)}, x^{(<=,F)}, x^{(>,F)} for nonnegative rational x.
inline Float float_ge(const Format& f, const Rational& r) {
  Float fl = detail::float_floor_nonneg(f, r);
  if (Rational::compare(to_rational(f, fl), r) == 0) return fl;
  auto s = succ(f, fl);
  if (!s) throw DomainError("no float at or above value");
  return *s;
}

inline Float float_le(const Format& f, const Rational& r) { return detail::float_floor_nonneg(f, r); }

inline Float float_lt(const Format& f, const Rational& r) {
  Float fl = detail::float_floor_nonneg(f, r);
  if (Rational::compare(to_rational(f, fl), r) < 0) return fl;
  auto p = pred(f, fl);
  if (!p) throw DomainError("no float strictly below value");
  return *p;
}

inline Float float_gt(const Format& f, const Rational& r) {
  Float fl = float_ge(f, r);
  if (Rational::compare(to_rational(f, fl), r) > 0) return fl;
  auto s = succ(f, fl);
  if (!s) throw DomainError("no float strictly above value");
  return *s;
}

}  // namespace floatnet
