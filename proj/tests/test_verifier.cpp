#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "floatnet/suites.hpp"
#include "floatnet/verifier.hpp"
#include "oracle.hpp"

using namespace floatnet;

TEST_CASE("enumerate_floats: counts and edge forms") {
  Format f = make_format(Kind::Fpq, 4, 5);
  // [0, 1] holds 241 values: zero, 15 subnormals, 14 full binades, and 1.0.
  // Derived independently by a successor walk.
  size_t walk = 0;
  Float cur = make_zero(+1);
  for (;;) {
    ++walk;
    if (compare_finite(cur, one(f)) >= 0) break;
    cur = *succ(f, cur);
  }
  CHECK(walk == 241);
  auto pts = enumerate_floats(f, make_zero(+1), one(f));
  CHECK(pts.size() == walk);
  for (size_t i = 0; i + 1 < pts.size(); ++i) CHECK(compare_finite(pts[i], pts[i + 1]) < 0);
  // a singleton range
  auto single = enumerate_floats(f, one(f), one(f));
  REQUIRE(single.size() == 1);
  CHECK(same_value(single[0], one(f)));
  // Fp needs a window
  Format fp = make_format(Kind::Fp, 4);
  CHECK_THROWS_AS(enumerate_floats(fp, make_zero(+1), one(fp)), UnboundedEnumeration);
  ExpWindow w{-3, 3};
  auto windowed = enumerate_floats(fp, neg(one(fp)), one(fp), w);
  CHECK(windowed.size() == 2 * 3 * 16 + 2 + 1);  // binades -3..-1 each side, +-1, zero
  for (size_t i = 0; i + 1 < windowed.size(); ++i)
    CHECK(compare_finite(windowed[i], windowed[i + 1]) < 0);
}

TEST_CASE("oscillation: golden values and corrected families") {
  Format f = make_format(Kind::Fp, 4);
  Network net = naive_relu_indicator(f);
  auto value_at = [&](const Dyadic& d) {
    return eval(net, {round_dyadic(f, d)}).output;
  };
  // x = 3 has n_x = 0, so the parity value is 0
  CHECK(value_at(Dyadic::from_int(3)).is_zero());
  // x = 3 + 2^{1-p} has n_x = 1: output 2
  CHECK(same_value(value_at(Dyadic(1, BigUint(25), -3)),
                   round_dyadic(f, Dyadic::from_int(2))));
  // x >= 5 gives 0 away from the corrected binade
  CHECK(value_at(Dyadic::from_int(5)).is_zero());
  CHECK(value_at(Dyadic::from_int(8)).is_zero());
  // corrected family 1: pred(1)
  Float p1 = *pred(f, one(f));
  CHECK(same_value(eval(net, {p1}).output, round_dyadic(f, Dyadic(1, BigUint(1), -1))));
  // corrected family 2: odd significand in [2^{p+1}, 2^{p+2})
  Float x34 = round_dyadic(f, Dyadic::from_int(34));
  CHECK(same_value(eval(net, {x34}).output, round_dyadic(f, Dyadic::from_int(32))));
  CHECK(value_at(Dyadic::from_int(36)).is_zero());  // even significand: unaffected
  // the full sweep is mismatch-free against the corrected closed form
  Report rep = reproduce_oscillation(4);
  CHECK(rep.ok());
  CHECK(rep.checked > 500);
}

TEST_CASE("oscillation: corrected families match hardware binary32") {
  static_assert(std::numeric_limits<float>::is_iec559);
  // The as-printed table says 0 at both corrected families; hardware agrees
  // with the emulator instead.
  const float p2 = 8388608.0f;  // 2^23
  auto hw = [&](float x) {
    auto relu = [](float v) { return v > 0 ? v : 0.0f; };
    return relu(x * p2 - (p2 - 1.0f)) - relu(x * p2 - p2);
  };
  float pred1 = std::nextafterf(1.0f, 0.0f);
  CHECK(hw(pred1) == 0.5f);
  CHECK(hw(16777218.0f) == 16777216.0f);  // odd significand in [2^24, 2^25)
  CHECK(hw(16777220.0f) == 0.0f);

  Format f = make_format(Kind::Fp, 23);
  Network net = naive_relu_indicator(f);
  Float x1 = *pred(f, one(f));
  CHECK(same_value(eval(net, {x1}).output, round_dyadic(f, Dyadic(1, BigUint(1), -1))));
  Float x2 = round_dyadic(f, Dyadic::from_int(16777218));
  CHECK(same_value(eval(net, {x2}).output, round_dyadic(f, Dyadic::from_int(16777216))));
  // and the expectation function flags exactly these as corrected
  CHECK(oscillation_expected(23, f, x1).corrected);
  CHECK(oscillation_expected(23, f, x2).corrected);
  CHECK(!oscillation_expected(23, f, one(f)).corrected);
}

TEST_CASE("catastrophic cancellation identity") {
  Report rep = catastrophic_identity({4, 8, 12, 23});
  CHECK(rep.ok());
  CHECK(rep.checked == 4);
  // spelled out for one precision: the float result is 0, the true value 1
  Format f = make_format(Kind::Fp, 8);
  Float delta = round_dyadic(f, Dyadic::scaled_pow2(1, -10));
  Float r = mul(f, round_dyadic(f, Dyadic::scaled_pow2(1, 10)),
                sub(f, add(f, one(f), delta), one(f)));
  CHECK(r.is_zero());
}

TEST_CASE("verify_memorization and overflow_scan reports") {
  Format f = make_format(Kind::Fpq, 4, 5);
  std::vector<std::vector<Float>> zs = {{one(f)}, {neg(one(f))}};
  std::vector<Float> ys = {round_dyadic(f, Dyadic::from_int(3)), make_zero(+1)};
  Network net = relu_memorizer(f, zs, ys);
  Report mem = verify_memorization(net, zs, ys);
  CHECK(mem.ok());
  CHECK(mem.checked == 2);
  Report scan = overflow_scan(net, no_overflow_axis(f));
  CHECK(scan.ok());
  CHECK(scan.checked == no_overflow_axis(f).size());
  // a deliberately wrong dataset produces a counterexample with detail
  std::vector<Float> wrong = {ys[0], one(f)};
  Report bad = verify_memorization(net, zs, wrong);
  CHECK(!bad.ok());
  REQUIRE(!bad.counterexamples.empty());
  CHECK(bad.counterexamples[0].contains("want"));
}

TEST_CASE("reports are byte-stable across runs") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Report a = run_lemma_suite(f, LemmaId::IntegerExact);
  Report b = run_lemma_suite(f, LemmaId::IntegerExact);
  CHECK(a.to_json().dump() == b.to_json().dump());
  MemorizationConfig cfg;
  cfg.trials = 3;
  cfg.seed = 9;
  Report m1 = memorization_suite(f, Activation::Step, cfg);
  Report m2 = memorization_suite(f, Activation::Step, cfg);
  CHECK(m1.to_json().dump() == m2.to_json().dump());
  // and the serialized form carries no timing field
  CHECK(!a.to_json().contains("wall_ms"));
}

TEST_CASE("report counterexamples keep enumeration order, smallest first") {
  Report rep;
  rep.suite = "fake";
  for (int i = 0; i < 40; ++i) {
    rep.record(i % 2 == 1, [&] { return nlohmann::json{{"i", i}}; });
  }
  CHECK(rep.counterexamples.size() == Report::kMaxCounterexamples);
  CHECK(rep.counterexamples[0]["i"] == 0);
  CHECK(rep.checked == 40);
  CHECK(rep.passed == 20);
}

TEST_CASE("memorization suites: randomized battery at small scale") {
  MemorizationConfig cfg;
  cfg.trials = 8;
  cfg.seed = 31;
  for (Activation act : {Activation::Step, Activation::ReLU}) {
    Report fpq = memorization_suite(make_format(Kind::Fpq, 4, 5), act, cfg);
    CHECK(fpq.ok());
    Report fp = memorization_suite(make_format(Kind::Fp, 4), act, cfg);
    CHECK(fp.ok());
  }
}

TEST_CASE("epsilon-zero suite reproduces the rounded target everywhere") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Report r = epsilon_zero_suite(f, Activation::Step);
  CHECK(r.ok());
  CHECK(r.checked == 3);  // the three d=1 targets
}
