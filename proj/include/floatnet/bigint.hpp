#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "floatnet/errors.hpp"

namespace floatnet {

// Arbitrary-precision unsigned integer, little-endian 64-bit limbs with no
// trailing zero limbs. Only the operations the exact float/dyadic/rational
// layers need; sizes stay small (a few hundred bits) in every workload.
class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(uint64_t v) {
    if (v != 0) limbs_.push_back(v);
  }

  static BigUint from_u128(unsigned __int128 v) {
    BigUint r;
    uint64_t lo = static_cast<uint64_t>(v);
    uint64_t hi = static_cast<uint64_t>(v >> 64);
    if (hi != 0) {
      r.limbs_ = {lo, hi};
    } else if (lo != 0) {
      r.limbs_ = {lo};
    }
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  size_t bit_length() const {
    if (limbs_.empty()) return 0;
    return 64 * (limbs_.size() - 1) + (64 - static_cast<size_t>(__builtin_clzll(limbs_.back())));
  }

  // Index of the lowest set bit; requires a nonzero value.
  size_t trailing_zeros() const {
    for (size_t i = 0; i < limbs_.size(); ++i) {
      if (limbs_[i] != 0) return 64 * i + static_cast<size_t>(__builtin_ctzll(limbs_[i]));
    }
    throw DomainError("trailing_zeros of zero");
  }

  bool bit(size_t i) const {
    size_t limb = i / 64;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 64)) & 1u;
  }

  bool fits_u64() const { return limbs_.size() <= 1; }
  bool fits_u128() const { return limbs_.size() <= 2; }

  uint64_t to_u64() const {
    if (!fits_u64()) throw DomainError("BigUint does not fit in 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
  }

  unsigned __int128 to_u128() const {
    if (!fits_u128()) throw DomainError("BigUint does not fit in 128 bits");
    unsigned __int128 v = 0;
    if (limbs_.size() > 1) v = (static_cast<unsigned __int128>(limbs_[1]) << 64);
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
  }

  static int compare(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  friend bool operator==(const BigUint& a, const BigUint& b) { return compare(a, b) == 0; }
  friend bool operator<(const BigUint& a, const BigUint& b) { return compare(a, b) < 0; }
  friend bool operator<=(const BigUint& a, const BigUint& b) { return compare(a, b) <= 0; }

  static BigUint add(const BigUint& a, const BigUint& b) {
    BigUint r;
    const auto& x = a.limbs_.size() >= b.limbs_.size() ? a.limbs_ : b.limbs_;
    const auto& y = a.limbs_.size() >= b.limbs_.size() ? b.limbs_ : a.limbs_;
    r.limbs_.resize(x.size());
    unsigned __int128 carry = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      unsigned __int128 s = carry + x[i] + (i < y.size() ? y[i] : 0);
      r.limbs_[i] = static_cast<uint64_t>(s);
      carry = s >> 64;
    }
    if (carry) r.limbs_.push_back(static_cast<uint64_t>(carry));
    return r;
  }

  // a - b; requires a >= b.
  static BigUint sub(const BigUint& a, const BigUint& b) {
    if (compare(a, b) < 0) throw DomainError("BigUint::sub underflow");
    BigUint r;
    r.limbs_.resize(a.limbs_.size());
    unsigned __int128 borrow = 0;
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      unsigned __int128 d = static_cast<unsigned __int128>(a.limbs_[i]) -
                            (i < b.limbs_.size() ? b.limbs_[i] : 0) - borrow;
      r.limbs_[i] = static_cast<uint64_t>(d);
      borrow = (d >> 64) ? 1 : 0;
    }
    r.trim();
    return r;
  }

  static BigUint mul(const BigUint& a, const BigUint& b) {
    if (a.is_zero() || b.is_zero()) return BigUint();
    BigUint r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      unsigned __int128 carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        unsigned __int128 cur = static_cast<unsigned __int128>(a.limbs_[i]) * b.limbs_[j] +
                                r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<uint64_t>(cur);
        carry = cur >> 64;
      }
      size_t k = i + b.limbs_.size();
      while (carry) {
        unsigned __int128 cur = carry + r.limbs_[k];
        r.limbs_[k] = static_cast<uint64_t>(cur);
        carry = cur >> 64;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  BigUint shl(uint64_t n) const {
    if (is_zero() || n == 0) return *this;
    BigUint r;
    size_t limb_shift = n / 64, bit_shift = n % 64;
    r.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      r.limbs_[i + limb_shift] |= limbs_[i] << bit_shift;
      if (bit_shift != 0) r.limbs_[i + limb_shift + 1] |= limbs_[i] >> (64 - bit_shift);
    }
    r.trim();
    return r;
  }

  BigUint shr(uint64_t n) const {
    if (is_zero()) return *this;
    if (n >= bit_length()) return BigUint();
    BigUint r;
    size_t limb_shift = n / 64, bit_shift = n % 64;
    r.limbs_.assign(limbs_.size() - limb_shift, 0);
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
      r.limbs_[i] = limbs_[i + limb_shift] >> bit_shift;
      if (bit_shift != 0 && i + limb_shift + 1 < limbs_.size())
        r.limbs_[i] |= limbs_[i + limb_shift + 1] << (64 - bit_shift);
    }
    r.trim();
    return r;
  }

  // True iff the low n bits contain a set bit.
  bool any_low_bits(uint64_t n) const {
    size_t full = std::min<size_t>(n / 64, limbs_.size());
    for (size_t i = 0; i < full; ++i)
      if (limbs_[i] != 0) return true;
    size_t rem = n % 64;
    if (rem != 0 && n / 64 < limbs_.size()) {
      if ((limbs_[n / 64] & ((uint64_t(1) << rem) - 1)) != 0) return true;
    }
    return false;
  }

  // Schoolbook binary long division. Sizes here are tiny, clarity wins.
  static void divmod(const BigUint& a, const BigUint& b, BigUint& q, BigUint& r) {
    if (b.is_zero()) throw DomainError("BigUint division by zero");
    q = BigUint();
    r = BigUint();
    if (compare(a, b) < 0) {
      r = a;
      return;
    }
    size_t n = a.bit_length();
    q.limbs_.assign((n + 63) / 64, 0);
    for (size_t i = n; i-- > 0;) {
      r = r.shl(1);
      if (a.bit(i)) {
        if (r.limbs_.empty()) r.limbs_.push_back(1);
        else r.limbs_[0] |= 1;
      }
      if (compare(r, b) >= 0) {
        r = sub(r, b);
        q.limbs_[i / 64] |= uint64_t(1) << (i % 64);
      }
    }
    q.trim();
  }

  static BigUint gcd(BigUint a, BigUint b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    size_t az = a.trailing_zeros(), bz = b.trailing_zeros();
    size_t shift = std::min(az, bz);
    a = a.shr(az);
    do {
      b = b.shr(b.trailing_zeros());
      if (compare(a, b) > 0) std::swap(a, b);
      b = sub(b, a);
    } while (!b.is_zero());
    return a.shl(shift);
  }

  static BigUint pow2(uint64_t n) { return BigUint(1).shl(n); }

  static BigUint from_decimal(const std::string& s) {
    BigUint r;
    for (char c : s) {
      if (c < '0' || c > '9') throw ParseError("bad decimal digit in '" + s + "'");
      r = add(mul(r, BigUint(10)), BigUint(static_cast<uint64_t>(c - '0')));
    }
    return r;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigUint cur = *this, q, r;
    BigUint ten(10);
    while (!cur.is_zero()) {
      divmod(cur, ten, q, r);
      out.push_back(static_cast<char>('0' + (r.is_zero() ? 0 : r.to_u64())));
      cur = q;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<uint64_t> limbs_;
};

}  // namespace floatnet
