#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "floatnet/arith.hpp"
#include "floatnet/round.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

// mu(x): the scale of the lowest-terms dyadic form of x, i.e. the largest k
// with x * 2^{-k} an odd integer.
inline int64_t mu(const Format& f, const Float& x) {
  if (!x.is_finite() || x.sig == 0) throw DomainError("mu of zero or special value");
  return (x.exp - f.p) + static_cast<int64_t>(__builtin_ctzll(x.sig));
}

// Representability test. For Fpq this is the normalized-exponent test
//   -p+e_min <= e_x <= e_max  and  0 <= e_x - mu(x) <= p - c_x,
// and for Fp it asks for an odd part of at most p+1 bits. Equivalent to
// round(f, x) == x; the test suite checks that equivalence exhaustively.
inline bool is_representable(const Format& f, const Dyadic& x) {
  if (x.is_zero()) return true;
  int64_t e = x.mag_exponent();     // normalized exponent
  int64_t m = x.exp2;               // mu of the value
  int64_t bits = e - m + 1;         // bit length of the odd part
  if (f.kind == Kind::Fp) return bits <= f.p + 1;
  if (e < -f.p + f.e_min || e > f.e_max) return false;
  int64_t c = e < f.e_min ? f.e_min - e : 0;
  return e - m >= 0 && e - m <= f.p - c;
}

inline bool is_representable(const Format& f, const Rational& x) {
  if (!x.is_dyadic()) return false;
  return is_representable(f, x.to_dyadic());
}

// Universally-quantified lemma checks return a verdict; a witness is attached
// exactly when the hypothesis matched and the conclusion failed.
struct LemmaWitness {
  Float x, y;
  std::string detail;
};

struct LemmaVerdict {
  bool holds = true;
  bool hypothesis_matched = false;
  std::optional<LemmaWitness> witness;
};

namespace detail {

inline bool sub_is_exact(const Format& f, const Float& a, const Float& b) {
  Float r = sub(f, a, b);
  if (!r.is_finite()) return false;
  Dyadic exact = Dyadic::sub(to_dyadic(f, a), to_dyadic(f, b));
  return Dyadic::compare(to_dyadic(f, r), exact) == 0;
}

inline bool add_is_exact(const Format& f, const Float& a, const Float& b) {
  Float r = add(f, a, b);
  if (!r.is_finite()) return false;
  Dyadic exact = Dyadic::add(to_dyadic(f, a), to_dyadic(f, b));
  return Dyadic::compare(to_dyadic(f, r), exact) == 0;
}

inline LemmaVerdict fail(const Float& x, const Float& y, std::string detail) {
  LemmaVerdict v;
  v.holds = false;
  v.hypothesis_matched = true;
  v.witness = LemmaWitness{x, y, std::move(detail)};
  return v;
}

inline LemmaVerdict vacuous() { return LemmaVerdict{}; }

inline LemmaVerdict matched_ok() {
  LemmaVerdict v;
  v.hypothesis_matched = true;
  return v;
}

}  // namespace detail

// Sterbenz: 0 <= y/2 <= x <= y implies x (-) y and y (-) x are exact.
inline LemmaVerdict check_sterbenz(const Format& f, const Float& x, const Float& y) {
  if (!x.is_finite() || !y.is_finite()) throw DomainError("check_sterbenz needs finite values");
  bool y_nonneg = y.sig == 0 || y.sign > 0;
  Float half_y = y;
  if (half_y.sig != 0) half_y.exp -= 1;  // exact value y/2, for comparison only
  bool hyp = y_nonneg && compare_finite(half_y, x) <= 0 && compare_finite(x, y) <= 0;
  if (!hyp) return detail::vacuous();
  if (!detail::sub_is_exact(f, x, y)) return detail::fail(x, y, "x - y inexact");
  if (!detail::sub_is_exact(f, y, x)) return detail::fail(x, y, "y - x inexact");
  return detail::matched_ok();
}

// Exact-subtraction lemma: same sign, e_x <= e_y (normalized exponents),
// mu(x) >= e_y - p implies both differences exact; additionally
// |x + y| <= 2^{1+e_y} implies the sum is exact.
inline LemmaVerdict check_exact_lemma(const Format& f, const Float& x, const Float& y) {
  if (!x.is_finite() || !y.is_finite()) throw DomainError("check_exact_lemma needs finite values");
  if (x.sig == 0 || y.sig == 0) return detail::vacuous();
  if (x.sign != y.sign) return detail::vacuous();
  int64_t ex = norm_exp(f, x), ey = norm_exp(f, y);
  if (ex > ey) return detail::vacuous();
  if (mu(f, x) < ey - f.p) return detail::vacuous();
  if (!detail::sub_is_exact(f, x, y)) return detail::fail(x, y, "x - y inexact");
  if (!detail::sub_is_exact(f, y, x)) return detail::fail(x, y, "y - x inexact");
  Dyadic sum = Dyadic::add(to_dyadic(f, x), to_dyadic(f, y));
  int cmp_sum = Dyadic::compare(sum.abs(), Dyadic::scaled_pow2(1, 1 + ey));
  // The addition clause presumes 2^{1+e_y} itself is representable; at
  // e_y = e_max the boundary |x+y| = 2^{1+e_max} overflows, so the clause
  // applies only below it there.
  bool sum_hyp = cmp_sum < 0 || (cmp_sum == 0 && (f.kind == Kind::Fp || ey < f.e_max));
  if (sum_hyp) {
    if (!detail::add_is_exact(f, x, y)) return detail::fail(x, y, "x + y inexact");
  }
  return detail::matched_ok();
}

// Integer-exactness: for integer values x, y in [2^{1+p}] the differences are
// exact; for x, y in [2^p] the sum is exact as well.
inline LemmaVerdict check_integer_exact(const Format& f, const Float& x, const Float& y) {
  if (!x.is_finite() || !y.is_finite())
    throw DomainError("check_integer_exact needs finite values");
  auto as_small_int = [&](const Float& v) -> std::optional<uint64_t> {
    if (v.sig == 0 || v.sign < 0) return std::nullopt;
    int64_t k = v.exp - f.p;  // value = sig * 2^k
    int64_t tz = __builtin_ctzll(v.sig);
    if (k + tz < 0) return std::nullopt;  // not an integer
    int64_t bits = (64 - __builtin_clzll(v.sig)) + k;
    if (bits > f.p + 2) return std::nullopt;
    uint64_t n = k >= 0 ? (v.sig << k) : (v.sig >> -k);
    if (n == 0 || n > (uint64_t(2) << f.p)) return std::nullopt;
    return n;
  };
  auto nx = as_small_int(x), ny = as_small_int(y);
  if (!nx || !ny) return detail::vacuous();
  if (!detail::sub_is_exact(f, x, y)) return detail::fail(x, y, "x - y inexact");
  if (!detail::sub_is_exact(f, y, x)) return detail::fail(x, y, "y - x inexact");
  if (*nx <= (uint64_t(1) << f.p) && *ny <= (uint64_t(1) << f.p)) {
    if (!detail::add_is_exact(f, x, y)) return detail::fail(x, y, "x + y inexact");
  }
  return detail::matched_ok();
}

// Absorption: |x| <= 2^{e_y - p - 2} implies y (+) x = y (-) x = y. The
// hypothesis must bound the magnitude; exponent-only variants (e_x or mu(x)
// at most e_y - p - 2) admit binade-boundary counterexamples, where an x just
// below 2^{e_y-p-1} subtracted from a y with significand 1 crosses into the
// finer binade. The test suite demonstrates the gap.
inline LemmaVerdict check_ignore(const Format& f, const Float& x, const Float& y) {
  if (!x.is_finite() || !y.is_finite()) throw DomainError("check_ignore needs finite values");
  if (y.sig == 0) return detail::vacuous();
  if (x.sig == 0) {
    // Trivial absorption; still check it.
    if (!same_value(add(f, y, x), y)) return detail::fail(x, y, "y + 0 != y");
    if (!same_value(sub(f, y, x), y)) return detail::fail(x, y, "y - 0 != y");
    return detail::matched_ok();
  }
  int64_t ey = norm_exp(f, y);
  int64_t ex = norm_exp(f, x);
  bool x_pow2 = (x.sig & (x.sig - 1)) == 0;
  bool hyp = ex < ey - f.p - 2 || (ex == ey - f.p - 2 && x_pow2);  // |x| <= 2^{e_y-p-2}
  if (!hyp) return detail::vacuous();
  if (!same_value(add(f, y, x), y)) return detail::fail(x, y, "y + x != y");
  if (!same_value(sub(f, y, x), y)) return detail::fail(x, y, "y - x != y");
  return detail::matched_ok();
}

}  // namespace floatnet
