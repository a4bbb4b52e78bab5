#pragma once

#include <cstdint>

#include "floatnet/round.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

// Per-operation outcome flags, accumulated into evaluation traces.
struct OpStats {
  bool overflow = false;  // finite operands produced +-inf
  bool nan = false;       // non-NaN operands produced NaN
  bool inexact = false;   // rounded result differs from the exact result
};

namespace detail {

inline Float add_finite(const Format& f, const Float& a, const Float& b, OpStats* st) {
  if (a.sig == 0 && b.sig == 0) {
    // IEEE sign rules for exact zero sums under RNE: -0 only when both are -0.
    return make_zero(a.sign < 0 && b.sign < 0 ? -1 : +1);
  }
  if (a.sig == 0) return b;
  if (b.sig == 0) return a;
  int64_t ka = a.exp - f.p, kb = b.exp - f.p;
  int64_t k = ka < kb ? ka : kb;
  int64_t da = ka - k, db = kb - k;
  bool inexact = false;
  Float r;
  if (da <= 60 && db <= 60) {
    __int128 sa = static_cast<__int128>(static_cast<unsigned __int128>(a.sig) << da);
    __int128 sb = static_cast<__int128>(static_cast<unsigned __int128>(b.sig) << db);
    __int128 s = (a.sign > 0 ? sa : -sa) + (b.sign > 0 ? sb : -sb);
    if (s == 0) return make_zero(+1);  // exact cancellation of opposite values
    int sign = s > 0 ? 1 : -1;
    r = round_scaled_u128(f, sign, static_cast<unsigned __int128>(s > 0 ? s : -s), k, &inexact);
  } else {
    Dyadic exact = Dyadic::add(to_dyadic(f, a), to_dyadic(f, b));
    if (exact.is_zero()) return make_zero(+1);
    r = round_dyadic(f, exact, &inexact);
  }
  if (st) {
    st->inexact |= inexact;
    st->overflow |= r.is_inf();
  }
  return r;
}

}  // namespace detail

// a (+) b = round(a + b). NaN dominates; inf + (-inf) = NaN.
inline Float add(const Format& f, const Float& a, const Float& b, OpStats* st = nullptr) {
  if (a.is_nan() || b.is_nan()) return make_nan();
  if (a.is_inf() || b.is_inf()) {
    if (a.is_inf() && b.is_inf()) {
      if (a.cls == b.cls) return a;
      if (st) st->nan = true;
      return make_nan();
    }
    return a.is_inf() ? a : b;
  }
  return detail::add_finite(f, a, b, st);
}

// a (-) b = a (+) (-b).
inline Float sub(const Format& f, const Float& a, const Float& b, OpStats* st = nullptr) {
  return add(f, a, neg(b), st);
}

// a (x) b = round(a * b). inf * 0 = NaN; otherwise IEEE sign rules.
inline Float mul(const Format& f, const Float& a, const Float& b, OpStats* st = nullptr) {
  if (a.is_nan() || b.is_nan()) return make_nan();
  int sa = a.cls == Cls::NegInf ? -1 : (a.is_finite() ? a.sign : 1);
  int sb = b.cls == Cls::NegInf ? -1 : (b.is_finite() ? b.sign : 1);
  int sign = sa * sb;
  if (a.is_inf() || b.is_inf()) {
    if ((a.is_finite() && a.sig == 0) || (b.is_finite() && b.sig == 0)) {
      if (st) st->nan = true;
      return make_nan();
    }
    return make_inf(sign);
  }
  if (a.sig == 0 || b.sig == 0) return make_zero(sign);
  unsigned __int128 mag = static_cast<unsigned __int128>(a.sig) * b.sig;
  bool inexact = false;
  Float r = round_scaled_u128(f, sign, mag, (a.exp - f.p) + (b.exp - f.p), &inexact);
  if (st) {
    st->inexact |= inexact;
    st->overflow |= r.is_inf();
  }
  return r;
}

}  // namespace floatnet
