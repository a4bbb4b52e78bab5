#include <doctest.h>

#include <bit>
#include <cstring>
#include <limits>

#include "floatnet/arith.hpp"
#include "floatnet/bits.hpp"
#include "floatnet/enumerate.hpp"
#include "floatnet/round.hpp"
#include "floatnet/text.hpp"
#include "floatnet/verifier.hpp"
#include "oracle.hpp"

using namespace floatnet;
using floatnet::testing::round_oracle;
using floatnet::testing::round_oracle_dyadic;

namespace {

Float fp_val(const Format& f, int64_t num, int64_t den_pow2) {
  return round_dyadic(f, Dyadic::scaled_pow2(num, -den_pow2));
}

}  // namespace

TEST_CASE("make_format: practical shapes and constraint bounds") {
  Format half = make_format(Kind::Fpq, 10, 5);
  CHECK(half.e_min == -14);
  CHECK(half.e_max == 15);
  Format bf16 = make_format(Kind::Fpq, 7, 8);
  CHECK(bf16.e_min == -126);
  CHECK(bf16.e_max == 127);
  Format single = make_format(Kind::Fpq, 23, 8);
  CHECK(single.e_min == -126);
  CHECK(Dyadic::compare(single.omega(),
                        Dyadic((int)1, BigUint((uint64_t(1) << 24) - 1), 127 - 23)) == 0);
  CHECK_THROWS_AS(make_format(Kind::Fpq, 3, 5), ConstraintViolation);
  CHECK_THROWS_AS(make_format(Kind::Fpq, 11, 5), ConstraintViolation);  // p > 2^{q-2}+2
  CHECK_THROWS_AS(make_format(Kind::Fpq, 10, 4), ConstraintViolation);
  CHECK_THROWS_AS(make_format(Kind::Fp, 0), ConstraintViolation);
  // derived constants recompute from (p, q)
  Format f = make_format(Kind::Fpq, 4, 5);
  CHECK(Dyadic::compare(f.omega(), Dyadic::from_int(63488)) == 0);
  CHECK(Dyadic::compare(f.omega_prime(), Dyadic::from_int(64512)) == 0);
  CHECK(Dyadic::compare(f.eta(), Dyadic::scaled_pow2(1, -18)) == 0);
  CHECK(Dyadic::compare(f.kappa(), Dyadic::from_int(992)) == 0);
  CHECK(f.e0() == 7);
}

TEST_CASE("round: ties to even, overflow boundary, identity on representables") {
  Format fp2 = make_format(Kind::Fp, 2);
  // 1.125 is the midpoint of 1.00 and 1.01; the even significand wins.
  Float tie = round_dyadic(fp2, Dyadic(1, BigUint(9), -3));
  CHECK(same_value(tie, one(fp2)));
  CHECK(same_value(tie, round_oracle(fp2, Rational(1, BigUint(9), BigUint(8)))));

  Format fpq = make_format(Kind::Fpq, 4, 5);
  // Omega' itself rounds to infinity (the boundary is included).
  Float inf = round_dyadic(fpq, Dyadic::from_int(64512));
  CHECK(inf.cls == Cls::PosInf);
  CHECK(round_dyadic(fpq, Dyadic::from_int(-64512)).cls == Cls::NegInf);
  CHECK(round_dyadic(fpq, Dyadic::from_int(64511)).is_finite());
  CHECK(same_value(round_oracle(fpq, Rational::from_int(64512)), make_inf(+1)));

  // identity on representables
  for (const Float& x : enumerate_all(fpq)) {
    Float r = round_dyadic(fpq, to_dyadic(fpq, x));
    CHECK(same_value(r, x));
  }
  CHECK(round_dyadic(fpq, Dyadic()).is_zero());
}

TEST_CASE("round agrees with the scan oracle on a dyadic grid") {
  for (Format f : {make_format(Kind::Fpq, 4, 5), make_format(Kind::Fp, 3)}) {
    Rng rng(99);
    for (int i = 0; i < 4000; ++i) {
      int64_t num = static_cast<int64_t>(rng.below(1 << 22)) - (1 << 21);
      int64_t scale = static_cast<int64_t>(rng.below(30)) - 21;
      Dyadic x = Dyadic::scaled_pow2(num, scale);
      Float got = round_dyadic(f, x);
      Float want = round_oracle_dyadic(f, x);
      CAPTURE(x.to_string());
      CHECK(same_value(got, want));
    }
  }
}

TEST_CASE("rounding monotonicity on a dense dyadic grid") {
  Format fpq = make_format(Kind::Fpq, 4, 5);
  // consecutive grid points k * 2^-20 across the subnormal/normal boundary
  Float prev_r;
  bool have_prev = false;
  for (int64_t k = -3000; k <= 3000; ++k) {
    Float r = round_dyadic(fpq, Dyadic::scaled_pow2(k, -20));
    if (have_prev) CHECK(compare_finite(prev_r, r) <= 0);
    prev_r = r;
    have_prev = true;
  }
  // and around the overflow threshold
  Float last;
  bool have = false;
  for (int64_t k = 64500; k <= 64524; ++k) {
    Float r = round_dyadic(fpq, Dyadic::from_int(k));
    bool inf = r.is_inf();
    if (have && last.is_inf()) CHECK(inf);
    last = r;
    have = true;
  }
}

TEST_CASE("half-ulp bound with equality only at ties") {
  Format fpq = make_format(Kind::Fpq, 4, 5);
  Rng rng(7);
  for (int i = 0; i < 5000; ++i) {
    int64_t num = static_cast<int64_t>(rng.below(1 << 20)) - (1 << 19);
    if (num == 0) continue;
    Dyadic x = Dyadic::scaled_pow2(num, static_cast<int64_t>(rng.below(24)) - 22);
    Float r = round_dyadic(fpq, x);
    if (!r.is_finite() || r.sig == 0) continue;
    Dyadic err = Dyadic::sub(to_dyadic(fpq, r), x).abs();
    Dyadic half_ulp = ulp(fpq, r);
    half_ulp.exp2 -= 1;
    CHECK(Dyadic::compare(err, half_ulp) <= 0);
    if (Dyadic::compare(err, half_ulp) == 0) {
      // equality only at ties: x must be the midpoint of two consecutive values
      CHECK(!is_representable(fpq, x));
      CHECK((r.sig & 1) == 0);
    }
  }
}

TEST_CASE("arithmetic: absorption, identities, exact-product example") {
  Format fp4 = make_format(Kind::Fp, 4);
  // 1 (+) 2^{-(p+2)} is absorbed
  Float delta = round_dyadic(fp4, Dyadic::scaled_pow2(1, -6));
  CHECK(same_value(add(fp4, one(fp4), delta), one(fp4)));
  // a (+) 0 = a, a (x) 1 = a over a whole small format
  Format fpq = make_format(Kind::Fpq, 4, 5);
  for (const Float& a : enumerate_all(fpq)) {
    CHECK(same_value(add(fpq, a, make_zero(+1)), a));
    CHECK(same_value(mul(fpq, a, one(fpq)), a));
  }
  // Fp(2): 1.25 (x) 1.25 = 1.5 (exact product 1.5625)
  Format fp2 = make_format(Kind::Fp, 2);
  Float v125 = fp_val(fp2, 5, 2);
  Float prod = mul(fp2, v125, v125);
  Rational exact = Rational(1, BigUint(25), BigUint(16));
  CHECK(same_value(prod, round_oracle(fp2, exact)));
  CHECK(same_value(prod, fp_val(fp2, 3, 1)));
}

TEST_CASE("arithmetic: special values and signed zeros") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Float pinf = make_inf(+1), ninf = make_inf(-1), nan = make_nan();
  CHECK(add(f, pinf, ninf).is_nan());
  CHECK(add(f, pinf, pinf).cls == Cls::PosInf);
  CHECK(mul(f, pinf, make_zero(+1)).is_nan());
  CHECK(mul(f, ninf, neg(one(f))).cls == Cls::PosInf);
  CHECK(add(f, nan, one(f)).is_nan());
  // (-x) (+) x = +0; (-0) (+) (-0) = -0; signs of zero products
  Float x = fp_val(f, 3, 1);
  Float z = add(f, neg(x), x);
  CHECK(z.is_zero());
  CHECK(z.sign == 1);
  Float nz = add(f, make_zero(-1), make_zero(-1));
  CHECK(nz.is_zero());
  CHECK(nz.sign == -1);
  Float mz = mul(f, neg(one(f)), make_zero(+1));
  CHECK(mz.is_zero());
  CHECK(mz.sign == -1);
  CHECK(same_value(make_zero(-1), make_zero(+1)));  // values compare equal
  // overflow of finite operands
  Float omega = round_dyadic(f, f.omega());
  OpStats st;
  Float of = add(f, omega, omega, &st);
  CHECK(of.cls == Cls::PosInf);
  CHECK(st.overflow);
}

TEST_CASE("commutativity of (+) and (x), exhaustive over Fpq(4,5)") {
  Format f = make_format(Kind::Fpq, 4, 5);
  std::vector<Float> values = enumerate_all(f);
  values.push_back(make_zero(-1));
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = i; j < values.size(); ++j) {
      const Float &a = values[i], &b = values[j];
      CHECK(same_value(add(f, a, b), add(f, b, a)));
      CHECK(same_value(mul(f, a, b), mul(f, b, a)));
    }
  }
}

TEST_CASE("succ/pred walk the value order") {
  Format fpq = make_format(Kind::Fpq, 4, 5);
  // succ(0) = eta
  Float eta = *succ(fpq, make_zero(+1));
  CHECK(Dyadic::compare(to_dyadic(fpq, eta), fpq.eta()) == 0);
  CHECK(Dyadic::compare(to_dyadic(fpq, eta), Dyadic::scaled_pow2(1, -18)) == 0);
  // succ at the top of the finite range is absent
  Float omega = round_dyadic(fpq, fpq.omega());
  CHECK(!succ(fpq, omega).has_value());
  CHECK(!pred(fpq, neg(omega)).has_value());
  // succ(-eta) crosses to zero
  CHECK(succ(fpq, neg(eta))->is_zero());
  // Fp: 0+ does not exist
  Format fp3 = make_format(Kind::Fp, 3);
  CHECK(!succ(fp3, make_zero(+1)).has_value());
  CHECK(!pred(fp3, make_zero(+1)).has_value());
  CHECK(succ(fp3, neg(one(fp3))).has_value());
  // order property across the whole format
  auto values = enumerate_all(fpq);
  for (size_t i = 0; i + 1 < values.size(); ++i) {
    auto s = succ(fpq, values[i]);
    REQUIRE(s.has_value());
    CHECK(same_value(*s, values[i + 1]));
    auto p = pred(fpq, values[i + 1]);
    REQUIRE(p.has_value());
    CHECK(same_value(*p, values[i]));
  }
}

TEST_CASE("bit encoding: layout, round trip, Fp rejection") {
  Format f = make_format(Kind::Fpq, 4, 5);
  CHECK(encode_bits(f, make_zero(+1)) == 0);
  CHECK(encode_bits(f, make_zero(-1)) == (uint64_t(1) << 9));
  CHECK(decode_bits(f, (uint64_t(0x1F) << 4)).cls == Cls::PosInf);
  // all 10-bit patterns round-trip (NaN payloads collapse to the canonical one)
  for (uint64_t bits = 0; bits < (uint64_t(1) << 10); ++bits) {
    Float v = decode_bits(f, bits);
    uint64_t back = encode_bits(f, v);
    if (v.is_nan()) {
      CHECK(decode_bits(f, back).is_nan());
    } else {
      CHECK(back == bits);
    }
  }
  Format single = make_format(Kind::Fpq, 23, 8);
  CHECK(encode_bits(single, one(single)) == 0x3F800000u);
  CHECK(bits_to_hex(single, 0x3F800000u) == "0x3F800000");
  Format fp = make_format(Kind::Fp, 4);
  CHECK_THROWS_AS(encode_bits(fp, one(fp)), FormatMismatch);
  CHECK_THROWS_AS(decode_bits(fp, 0), FormatMismatch);
}

TEST_CASE("bit encoding matches hardware binary32 on random values") {
  static_assert(std::numeric_limits<float>::is_iec559);
  Format f = make_format(Kind::Fpq, 23, 8);
  Rng rng(2024);
  for (int i = 0; i < 20000; ++i) {
    uint32_t bits = static_cast<uint32_t>(rng.next());
    float hw = std::bit_cast<float>(bits);
    Float v = decode_bits(f, bits);
    if (v.is_nan()) {
      CHECK(hw != hw);
      continue;
    }
    if (v.is_inf()) {
      CHECK(std::isinf(hw));
      continue;
    }
    // exact value comparison through the text of the double conversion
    double dv = static_cast<double>(hw);
    Rational rv = testing::float_value_rational(f, v);
    // |value| <= 2^128, so the double conversion is exact for binary32 inputs
    Rational rd = Rational::from_decimal("0");
    if (dv != 0) {
      int exp2 = 0;
      double frac = std::frexp(dv, &exp2);
      int64_t m = static_cast<int64_t>(std::ldexp(frac, 53));
      rd = Rational::mul(Rational::from_int(m), testing::pow2_rational(exp2 - 53));
    }
    CHECK(Rational::compare(rv, rd) == 0);
    CHECK(encode_bits(f, v) == bits);
  }
}

TEST_CASE("text form: examples, losslessness, malformed inputs") {
  Format fp3 = make_format(Kind::Fp, 3);
  Float v = parse_text(fp3, "1.101 × 2^-2");
  CHECK(v.sign == 1);
  CHECK(v.sig == 13);
  CHECK(v.exp == -2);
  CHECK(parse_text(fp3, "1.101 x 2^-2").sig == 13);  // ASCII form accepted
  CHECK_THROWS_AS(parse_text(fp3, "1.1011 × 2^0"), NotRepresentable);
  CHECK_THROWS_AS(parse_text(fp3, "0.101 × 2^0"), NotRepresentable);
  CHECK_THROWS_AS(parse_text(fp3, "1.21 × 2^0"), ParseError);
  CHECK_THROWS_AS(parse_text(fp3, ""), ParseError);
  CHECK_THROWS_AS(parse_text(fp3, "1.101"), ParseError);

  Format fpq = make_format(Kind::Fpq, 4, 5);
  Float eta = *succ(fpq, make_zero(+1));
  CHECK(same_value(parse_text(fpq, "0.0001 × 2^-14"), eta));
  CHECK(format_text(fpq, eta) == "0.0001 \xC3\x97 2^-14");
  CHECK_THROWS_AS(parse_text(fpq, "0.0001 × 2^-13"), NotRepresentable);
  CHECK_THROWS_AS(parse_text(fpq, "1.0000 × 2^16"), NotRepresentable);
  CHECK(format_text(fpq, make_zero(-1)) == "-0");
  CHECK(format_text(fpq, make_inf(-1)) == "-inf");
  CHECK(parse_text(fpq, "nan").is_nan());

  // parse(format_text(x)) is the identity across the whole format
  for (const Float& x : enumerate_all(fpq)) {
    Float back = parse_text(fpq, format_text(fpq, x));
    CHECK(back.sign == x.sign);
    CHECK(same_value(back, x));
  }
}

TEST_CASE("hardware conformance, randomized slice") {
  Report r = hardware_conformance(50000, 12345);
  CHECK(r.ok());
  CHECK(r.checked >= 3 * 50000);
}
