#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "floatnet/errors.hpp"
#include "floatnet/round.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

// Exponent window bounding Fp enumerations. A value is inside the window when
// its canonical exponent lies in [lo, hi]; zero is always inside.
struct ExpWindow {
  int64_t lo = 0;
  int64_t hi = 0;
};

// All Fpq values in [lo, hi], strictly increasing, +-0 appearing once (+0).
inline std::vector<Float> enumerate_floats(const Format& f, const Float& lo, const Float& hi) {
  if (f.kind != Kind::Fpq)
    throw UnboundedEnumeration("Fp enumeration requires an exponent window");
  if (!lo.is_finite() || !hi.is_finite()) throw DomainError("enumeration bounds must be finite");
  if (compare_finite(lo, hi) > 0) throw DomainError("enumeration bounds out of order");
  std::vector<Float> out;
  Float cur = lo;
  if (cur.is_zero()) cur = make_zero(+1);
  for (;;) {
    out.push_back(cur);
    if (out.size() > (size_t(1) << 24))
      throw ConfigError("enumeration over " + f.spec_string() + " exceeds the in-memory budget");
    if (compare_finite(cur, hi) >= 0) break;
    auto nxt = succ(f, cur);
    if (!nxt) break;
    cur = *nxt;
  }
  return out;
}

// Fp (and Fpq) enumeration restricted to an exponent window, ascending.
inline std::vector<Float> enumerate_floats(const Format& f, const Float& lo, const Float& hi,
                                           const ExpWindow& window) {
  if (!lo.is_finite() || !hi.is_finite()) throw DomainError("enumeration bounds must be finite");
  if (compare_finite(lo, hi) > 0) throw DomainError("enumeration bounds out of order");
  int64_t wlo = window.lo, whi = window.hi;
  if (f.kind == Kind::Fpq) {
    wlo = std::max<int64_t>(wlo, f.e_min);
    whi = std::min<int64_t>(whi, f.e_max);
  }
  if (wlo > whi) throw DomainError("empty exponent window");
  std::vector<Float> out;
  const uint64_t m_lo = uint64_t(1) << f.p, m_hi = (uint64_t(2) << f.p) - 1;
  auto push_if_in_range = [&](const Float& v) {
    if (compare_finite(lo, v) <= 0 && compare_finite(v, hi) <= 0) out.push_back(v);
  };
  // Negatives, most negative first.
  for (int64_t e = whi; e >= wlo; --e) {
    for (uint64_t m = m_hi;; --m) {
      push_if_in_range(make_finite(-1, m, e));
      if (m == m_lo) break;
    }
    if (f.kind == Kind::Fpq && e == f.e_min) {
      for (uint64_t m = m_lo - 1; m >= 1; --m) push_if_in_range(make_finite(-1, m, e));
    }
  }
  push_if_in_range(make_zero(+1));
  for (int64_t e = wlo; e <= whi; ++e) {
    if (f.kind == Kind::Fpq && e == f.e_min) {
      for (uint64_t m = 1; m < m_lo; ++m) push_if_in_range(make_finite(1, m, e));
    }
    for (uint64_t m = m_lo; m <= m_hi; ++m) push_if_in_range(make_finite(1, m, e));
  }
  return out;
}

// Convenience: every finite Fpq value, ascending. Rejected for formats whose
// full enumeration would not fit in memory.
inline std::vector<Float> enumerate_all(const Format& f) {
  if (f.kind != Kind::Fpq) throw UnboundedEnumeration("enumerate_all is defined for Fpq only");
  if (f.p + f.q > 22)
    throw ConfigError("format " + f.spec_string() + " is too large for exhaustive enumeration");
  uint64_t m_hi = (uint64_t(2) << f.p) - 1;
  Float omega = make_finite(1, m_hi, f.e_max);
  return enumerate_floats(f, neg(omega), omega);
}

}  // namespace floatnet
