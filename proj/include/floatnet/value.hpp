#pragma once

#include <cstdint>

#include "floatnet/dyadic.hpp"
#include "floatnet/errors.hpp"
#include "floatnet/format.hpp"
#include "floatnet/rational.hpp"

namespace floatnet {

enum class Cls : uint8_t { Finite, PosInf, NegInf, NaN };

// One value of a Format. Finite values are canonical triples
// (sign, significand m, exponent e) with value = sign * m * 2^{e-p}:
//   Fp:  nonzero has 2^p <= m < 2^{p+1}; zero is m = 0.
//   Fpq: e in [e_min, e_max]; m < 2^p (subnormal or zero) only at e = e_min.
// Zeros carry a sign but +0 and -0 compare equal. There is one canonical NaN.
struct Float {
  Cls cls = Cls::Finite;
  int8_t sign = 1;  // +1 or -1; meaningful for Finite (incl. zeros)
  uint64_t sig = 0;
  int64_t exp = 0;

  bool is_finite() const { return cls == Cls::Finite; }
  bool is_nan() const { return cls == Cls::NaN; }
  bool is_inf() const { return cls == Cls::PosInf || cls == Cls::NegInf; }
  bool is_zero() const { return cls == Cls::Finite && sig == 0; }
};

inline Float make_zero(int s = 1) { return Float{Cls::Finite, static_cast<int8_t>(s), 0, 0}; }
inline Float make_inf(int s) { return Float{s > 0 ? Cls::PosInf : Cls::NegInf, 1, 0, 0}; }
inline Float make_nan() { return Float{Cls::NaN, 1, 0, 0}; }

inline Float make_finite(int s, uint64_t sig, int64_t exp) {
  if (sig == 0) return make_zero(s);
  return Float{Cls::Finite, static_cast<int8_t>(s), sig, exp};
}

inline Float one(const Format& f) { return make_finite(1, uint64_t(1) << f.p, 0); }

inline Float neg(const Float& x) {
  switch (x.cls) {
    case Cls::PosInf: return make_inf(-1);
    case Cls::NegInf: return make_inf(+1);
    case Cls::NaN: return x;
    case Cls::Finite: {
      Float r = x;
      r.sign = static_cast<int8_t>(-r.sign);
      return r;
    }
  }
  return x;
}

inline Float abs_value(const Float& x) {
  if (x.cls == Cls::NegInf) return make_inf(+1);
  if (x.cls == Cls::Finite && x.sign < 0) return neg(x);
  return x;
}

inline bool is_canonical(const Format& f, const Float& x) {
  if (x.cls != Cls::Finite) return true;
  if (x.sig == 0) return x.exp == 0;
  if (x.sign != 1 && x.sign != -1) return false;
  uint64_t lo = uint64_t(1) << f.p, hi = uint64_t(2) << f.p;
  if (f.kind == Kind::Fp) return x.sig >= lo && x.sig < hi;
  if (x.exp < f.e_min || x.exp > f.e_max) return false;
  if (x.exp == f.e_min) return x.sig < hi;
  return x.sig >= lo && x.sig < hi;
}

// Exact value as a dyadic rational.
inline Dyadic to_dyadic(const Format& f, const Float& x) {
  if (!x.is_finite()) throw DomainError("to_dyadic on non-finite value");
  if (x.sig == 0) return Dyadic();
  return Dyadic(x.sign, BigUint(x.sig), x.exp - f.p);
}

inline Rational to_rational(const Format& f, const Float& x) {
  return Rational::from_dyadic(to_dyadic(f, x));
}

// Value equality: +0 == -0, NaN == NaN (one canonical NaN), finite values by
// their canonical triple.
inline bool same_value(const Float& a, const Float& b) {
  if (a.cls != b.cls) return false;
  if (a.cls != Cls::Finite) return true;
  if (a.sig == 0 && b.sig == 0) return true;
  return a.sign == b.sign && a.sig == b.sig && a.exp == b.exp;
}

// Total order on finite values (zeros compare equal regardless of sign).
inline int compare_finite(const Float& a, const Float& b) {
  if (!a.is_finite() || !b.is_finite()) throw DomainError("compare_finite on specials");
  bool az = a.sig == 0, bz = b.sig == 0;
  if (az && bz) return 0;
  if (az) return b.sign > 0 ? -1 : 1;
  if (bz) return a.sign > 0 ? 1 : -1;
  if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
  int mag;
  // Compare m_a * 2^{e_a} vs m_b * 2^{e_b} via the position of the top bit.
  int64_t wa = a.exp + static_cast<int64_t>(64 - __builtin_clzll(a.sig));
  int64_t wb = b.exp + static_cast<int64_t>(64 - __builtin_clzll(b.sig));
  if (wa != wb) {
    mag = wa < wb ? -1 : 1;
  } else {
    // Same magnitude exponent: align the smaller shift (bounded by 64 here
    // because top bits coincide).
    int64_t d = a.exp - b.exp;
    unsigned __int128 ma = a.sig, mb = b.sig;
    if (d > 0) ma <<= d;
    else mb <<= -d;
    mag = ma == mb ? 0 : (ma < mb ? -1 : 1);
  }
  return a.sign > 0 ? mag : -mag;
}

inline bool finite_lt(const Float& a, const Float& b) { return compare_finite(a, b) < 0; }
inline bool finite_le(const Float& a, const Float& b) { return compare_finite(a, b) <= 0; }

// Normalized view of a nonzero finite value x = s * a * 2^{E} with a in [1,2):
// E is the canonical exponent for normals and e_min - c for subnormals.
struct NormalizedView {
  int sign;
  int64_t exp;        // the normalized exponent (fraktur e)
  uint64_t sig_odd;   // significand as odd integer n with a = n * 2^{-(bits-1)}
  int sig_bits;       // bit length of sig_odd
  int64_t c;          // max{0, e_min - exp}; 0 for Fp
};

inline NormalizedView normalized_view(const Format& f, const Float& x) {
  if (!x.is_finite() || x.sig == 0) throw DomainError("normalized view of zero or special");
  NormalizedView v;
  v.sign = x.sign;
  int bits = 64 - __builtin_clzll(x.sig);
  v.exp = x.exp + bits - (f.p + 1);
  uint64_t m = x.sig >> __builtin_ctzll(x.sig);
  v.sig_odd = m;
  v.sig_bits = 64 - __builtin_clzll(m);
  v.c = 0;
  if (f.kind == Kind::Fpq && v.exp < f.e_min) v.c = f.e_min - v.exp;
  return v;
}

// Normalized exponent (fraktur e); equals the canonical exponent except for
// Fpq subnormals.
inline int64_t norm_exp(const Format& f, const Float& x) { return normalized_view(f, x).exp; }

}  // namespace floatnet
