#pragma once

#include <cstdint>
#include <string>

#include "floatnet/errors.hpp"
#include "floatnet/format.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

// IEEE-754-style bit layout for Fpq, most significant bit first:
//   [ sign : 1 ][ biased exponent : q ][ trailing significand : p ]
// Bias is 2^{q-1}-1. Exponent field 0 holds zero and subnormals, all-ones
// holds infinities and NaN. The canonical NaN encodes with the quiet bit set.
inline int bit_width(const Format& f) {
  if (f.kind != Kind::Fpq) throw FormatMismatch("bit layout is defined for Fpq only");
  return 1 + f.q + f.p;
}

inline uint64_t encode_bits(const Format& f, const Float& x) {
  int w = bit_width(f);
  if (w > 64) throw DomainError("bit layout wider than 64 bits");
  uint64_t bias = (uint64_t(1) << (f.q - 1)) - 1;
  uint64_t sign_bit = 0, exp_field = 0, frac = 0;
  switch (x.cls) {
    case Cls::NaN:
      exp_field = (uint64_t(1) << f.q) - 1;
      frac = uint64_t(1) << (f.p - 1);
      break;
    case Cls::PosInf:
      exp_field = (uint64_t(1) << f.q) - 1;
      break;
    case Cls::NegInf:
      sign_bit = 1;
      exp_field = (uint64_t(1) << f.q) - 1;
      break;
    case Cls::Finite: {
      sign_bit = x.sign < 0 ? 1 : 0;
      if (x.sig == 0) break;
      if (!is_canonical(f, x)) throw DomainError("encode_bits of non-canonical value");
      uint64_t lead = uint64_t(1) << f.p;
      if (x.sig >= lead) {
        exp_field = static_cast<uint64_t>(x.exp + static_cast<int64_t>(bias));
        frac = x.sig - lead;
      } else {
        exp_field = 0;  // subnormal
        frac = x.sig;
      }
      break;
    }
  }
  return (sign_bit << (f.q + f.p)) | (exp_field << f.p) | frac;
}

inline Float decode_bits(const Format& f, uint64_t bits) {
  int w = bit_width(f);
  if (w > 64) throw DomainError("bit layout wider than 64 bits");
  if (w < 64 && (bits >> w) != 0) throw DomainError("bit pattern wider than the format");
  uint64_t bias = (uint64_t(1) << (f.q - 1)) - 1;
  uint64_t frac = bits & ((uint64_t(1) << f.p) - 1);
  uint64_t exp_field = (bits >> f.p) & ((uint64_t(1) << f.q) - 1);
  int sign = ((bits >> (f.q + f.p)) & 1) ? -1 : 1;
  uint64_t all_ones = (uint64_t(1) << f.q) - 1;
  if (exp_field == all_ones) {
    if (frac != 0) return make_nan();
    return make_inf(sign);
  }
  if (exp_field == 0) {
    if (frac == 0) return make_zero(sign);
    return make_finite(sign, frac, f.e_min);
  }
  return make_finite(sign, frac | (uint64_t(1) << f.p),
                     static_cast<int64_t>(exp_field) - static_cast<int64_t>(bias));
}

inline std::string bits_to_hex(const Format& f, uint64_t bits) {
  int w = bit_width(f);
  int digits = (w + 3) / 4;
  static const char* hex = "0123456789ABCDEF";
  std::string s(static_cast<size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    s[static_cast<size_t>(digits - 1 - i)] = hex[(bits >> (4 * i)) & 0xF];
  }
  return "0x" + s;
}

}  // namespace floatnet
