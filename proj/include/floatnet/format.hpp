#pragma once

#include <cstdint>
#include <string>

#include "floatnet/dyadic.hpp"
#include "floatnet/errors.hpp"

namespace floatnet {

enum class Kind : uint8_t { Fp, Fpq };

// A number system: F_p (p-bit significand, unbounded exponent) or F_{p,q}
// (p-bit significand, q-bit exponent). Derived constants are recomputed on
// demand from (p, q) so they can never go stale.
struct Format {
  Kind kind = Kind::Fp;
  int32_t p = 0;
  int32_t q = 0;       // 0 for Fp
  int64_t e_min = 0;   // Fpq only
  int64_t e_max = 0;   // Fpq only

  bool is_fpq() const { return kind == Kind::Fpq; }

  Dyadic unit_roundoff() const { return Dyadic::scaled_pow2(1, -p); }  // u = 2^-p

  // Omega = (2-u) * 2^{e_max}, the largest finite value.
  Dyadic omega() const {
    require_fpq("omega");
    return Dyadic::scaled_pow2((int64_t(1) << (p + 1)) - 1, e_max - p);
  }

  // Omega' = Omega + 2^{e_max-p-1}; rounding maps |x| >= Omega' to +-inf.
  Dyadic omega_prime() const {
    require_fpq("omega_prime");
    return Dyadic::add(omega(), Dyadic::scaled_pow2(1, e_max - p - 1));
  }

  // eta = 2^{-p+e_min}, the smallest positive value.
  Dyadic eta() const {
    require_fpq("eta");
    return Dyadic::scaled_pow2(1, -p + e_min);
  }

  int64_t e0() const {
    require_fpq("e0");
    return (int64_t(1) << (q - 2)) - 1;
  }

  // kappa = (2-u) * 2^{-2-p+e_max}, the ReLU gadget threshold bound.
  Dyadic kappa() const {
    require_fpq("kappa");
    return Dyadic::scaled_pow2((int64_t(1) << (p + 1)) - 1, -2 - 2 * p + e_max);
  }

  friend bool operator==(const Format& a, const Format& b) {
    return a.kind == b.kind && a.p == b.p && a.q == b.q;
  }
  friend bool operator!=(const Format& a, const Format& b) { return !(a == b); }

  std::string spec_string() const {
    if (kind == Kind::Fp) return "fp:p=" + std::to_string(p);
    return "fpq:p=" + std::to_string(p) + ",q=" + std::to_string(q);
  }

 private:
  void require_fpq(const char* what) const {
    if (kind != Kind::Fpq) throw FormatMismatch(std::string(what) + " is defined for Fpq only");
  }
};

// Implementation bound: significands are kept in a machine word.
inline constexpr int32_t kMaxP = 62;
inline constexpr int32_t kMaxQ = 20;

inline Format make_format(Kind kind, int32_t p, int32_t q = 0) {
  Format f;
  f.kind = kind;
  f.p = p;
  if (kind == Kind::Fp) {
    if (p < 1) throw ConstraintViolation("Fp requires p >= 1");
    if (p > kMaxP) throw ConstraintViolation("p exceeds supported maximum " + std::to_string(kMaxP));
    return f;
  }
  if (q < 5) throw ConstraintViolation("Fpq requires q >= 5");
  if (q > kMaxQ) throw ConstraintViolation("q exceeds supported maximum " + std::to_string(kMaxQ));
  int64_t p_hi = (int64_t(1) << (q - 2)) + 2;
  if (p < 4 || p > p_hi)
    throw ConstraintViolation("Fpq requires 4 <= p <= 2^{q-2}+2; got p=" + std::to_string(p) +
                              ", q=" + std::to_string(q));
  if (p > kMaxP) throw ConstraintViolation("p exceeds supported maximum " + std::to_string(kMaxP));
  f.q = q;
  f.e_min = -(int64_t(1) << (q - 1)) + 2;
  f.e_max = (int64_t(1) << (q - 1)) - 1;
  return f;
}

// "fp:p=4" or "fpq:p=4,q=5".
inline Format parse_format_spec(const std::string& s) {
  auto fail = [&]() -> Format {
    throw ConfigError("bad format spec '" + s + "' (expected fp:p=N or fpq:p=N,q=M)");
  };
  auto colon = s.find(':');
  if (colon == std::string::npos) return fail();
  std::string head = s.substr(0, colon);
  std::string rest = s.substr(colon + 1);
  auto parse_kv = [&](const std::string& kv, const std::string& key) -> int32_t {
    if (kv.size() < key.size() + 2 || kv.compare(0, key.size(), key) != 0 || kv[key.size()] != '=')
      fail();
    std::string v = kv.substr(key.size() + 1);
    if (v.empty()) fail();
    int64_t out = 0;
    for (char c : v) {
      if (c < '0' || c > '9') fail();
      out = out * 10 + (c - '0');
      if (out > 1000000) fail();
    }
    return static_cast<int32_t>(out);
  };
  if (head == "fp") return make_format(Kind::Fp, parse_kv(rest, "p"));
  if (head == "fpq") {
    auto comma = rest.find(',');
    if (comma == std::string::npos) return fail();
    return make_format(Kind::Fpq, parse_kv(rest.substr(0, comma), "p"),
                       parse_kv(rest.substr(comma + 1), "q"));
  }
  return fail();
}

}  // namespace floatnet
