#pragma once

#include <cstdint>
#include <string>

#include "floatnet/errors.hpp"
#include "floatnet/format.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

// Lossless textual form:
//   "1.0110 × 2^-3"   normal (exactly p significand digits)
//   "0.0001 × 2^-14"  Fpq subnormal (exponent is always e_min)
//   "0", "-0", "inf", "-inf", "nan"
// parse_text also accepts an ASCII "x" in place of the multiplication sign
// and tolerates fewer than p digits.
inline std::string format_text(const Format& f, const Float& x) {
  switch (x.cls) {
    case Cls::NaN: return "nan";
    case Cls::PosInf: return "inf";
    case Cls::NegInf: return "-inf";
    case Cls::Finite: break;
  }
  if (x.sig == 0) return x.sign < 0 ? "-0" : "0";
  std::string s;
  if (x.sign < 0) s.push_back('-');
  uint64_t lead = uint64_t(1) << f.p;
  s.push_back(x.sig >= lead ? '1' : '0');
  s.push_back('.');
  for (int i = f.p - 1; i >= 0; --i) s.push_back(((x.sig >> i) & 1) ? '1' : '0');
  s += " \xC3\x97 2^";  // UTF-8 multiplication sign
  s += std::to_string(x.exp);
  return s;
}

inline Float parse_text(const Format& f, const std::string& in) {
  // Strip surrounding whitespace.
  size_t b = in.find_first_not_of(" \t");
  size_t e = in.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError("empty float literal");
  std::string s = in.substr(b, e - b + 1);

  int sign = 1;
  size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    sign = s[i] == '-' ? -1 : 1;
    ++i;
  }
  std::string body = s.substr(i);
  if (body == "0") return make_zero(sign);
  if (body == "inf") return make_inf(sign);
  if (body == "nan") return make_nan();

  // "D.ddd <x> 2^E"
  size_t pos = 0;
  if (pos >= body.size() || (body[pos] != '0' && body[pos] != '1'))
    throw ParseError("bad leading digit in '" + in + "'");
  int lead = body[pos] - '0';
  ++pos;
  if (pos >= body.size() || body[pos] != '.') throw ParseError("expected '.' in '" + in + "'");
  ++pos;
  uint64_t frac = 0;
  int digits = 0;
  while (pos < body.size() && (body[pos] == '0' || body[pos] == '1')) {
    frac = (frac << 1) | static_cast<uint64_t>(body[pos] - '0');
    ++digits;
    if (digits > f.p)
      throw NotRepresentable("more than p=" + std::to_string(f.p) + " significand digits in '" +
                             in + "'");
    ++pos;
  }
  // Multiplication sign: UTF-8 "×" or ASCII 'x', with optional spaces.
  while (pos < body.size() && body[pos] == ' ') ++pos;
  if (pos + 1 < body.size() && static_cast<unsigned char>(body[pos]) == 0xC3 &&
      static_cast<unsigned char>(body[pos + 1]) == 0x97) {
    pos += 2;
  } else if (pos < body.size() && (body[pos] == 'x' || body[pos] == 'X' || body[pos] == '*')) {
    pos += 1;
  } else {
    throw ParseError("expected multiplication sign in '" + in + "'");
  }
  while (pos < body.size() && body[pos] == ' ') ++pos;
  if (pos + 1 >= body.size() || body[pos] != '2' || body[pos + 1] != '^')
    throw ParseError("expected 2^E in '" + in + "'");
  pos += 2;
  bool exp_neg = false;
  if (pos < body.size() && (body[pos] == '+' || body[pos] == '-')) {
    exp_neg = body[pos] == '-';
    ++pos;
  }
  if (pos >= body.size()) throw ParseError("missing exponent in '" + in + "'");
  int64_t exp_mag = 0;
  while (pos < body.size()) {
    char c = body[pos];
    if (c < '0' || c > '9') throw ParseError("bad exponent digit in '" + in + "'");
    exp_mag = exp_mag * 10 + (c - '0');
    if (exp_mag > (int64_t(1) << 20)) throw ParseError("exponent out of range in '" + in + "'");
    ++pos;
  }
  int64_t exp = exp_neg ? -exp_mag : exp_mag;

  uint64_t sig = (static_cast<uint64_t>(lead) << f.p) | (frac << (f.p - digits));
  if (sig == 0) throw ParseError("significand is zero in '" + in + "'");
  if (lead == 0) {
    if (f.kind != Kind::Fpq) throw NotRepresentable("subnormal form is invalid for Fp");
    if (exp != f.e_min)
      throw NotRepresentable("subnormal exponent must be e_min=" + std::to_string(f.e_min));
  } else if (f.kind == Kind::Fpq && (exp < f.e_min || exp > f.e_max)) {
    throw NotRepresentable("exponent " + std::to_string(exp) + " outside [e_min, e_max]");
  }
  return make_finite(sign, sig, exp);
}

}  // namespace floatnet
