#include <doctest.h>

#include "floatnet/constructors.hpp"
#include "floatnet/suites.hpp"
#include "floatnet/verifier.hpp"
#include "oracle.hpp"

using namespace floatnet;

namespace {

Float fpq_int(const Format& f, int64_t v) { return round_dyadic(f, Dyadic::from_int(v)); }

Float indicator_sum(const Format& f, const std::pair<Network, Network>& halves, const Float& x) {
  return add(f, eval(halves.first, {x}).output, eval(halves.second, {x}).output);
}

}  // namespace

TEST_CASE("step_cube_indicator: point cell, window, and bounds") {
  Format f = make_format(Kind::Fp, 4);
  Float half = round_dyadic(f, Dyadic(1, BigUint(1), -1));
  Network cube = step_cube_indicator(f, {half}, {half});
  CHECK(count_params(cube) == 8);
  CHECK(same_value(eval(cube, {half}).output, one(f)));
  CHECK(eval(cube, {*succ(f, half)}).output.is_zero());
  // a 2-d box evaluated over a window
  Float a = round_dyadic(f, Dyadic(1, BigUint(1), -2));
  Float b = round_dyadic(f, Dyadic(1, BigUint(3), -2));
  Network box = step_cube_indicator(f, {a, a}, {b, b});
  CHECK(count_params(box) == 6 * 2 + 2);
  ExpWindow w{-6, 3};
  auto xs = enumerate_floats(f, neg(fpq_int(f, 8)), fpq_int(f, 8), w);
  for (const Float& x : xs) {
    for (const Float& y : xs) {
      bool inside = compare_finite(a, x) <= 0 && compare_finite(x, b) <= 0 &&
                    compare_finite(a, y) <= 0 && compare_finite(y, b) <= 0;
      Float out = eval(box, {x, y}).output;
      CHECK(same_value(out, inside ? one(f) : make_zero(+1)));
    }
  }
  CHECK_THROWS_AS(step_cube_indicator(f, {b}, {a}), DomainError);
  Format tiny = make_format(Kind::Fp, 1);
  std::vector<Float> alpha(3, one(tiny)), beta(3, one(tiny));
  CHECK_THROWS_AS(step_cube_indicator(tiny, alpha, beta), DimensionTooLarge);
}

TEST_CASE("step_memorizer: exactness, flags, duplicate detection") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    uint32_t n = 3, d = 1 + trial % 3;
    auto zs = detail::random_inputs(f, rng, n, d, -6, 6, nullptr, 0);
    std::vector<Float> ys;
    for (uint32_t i = 0; i < n; ++i) ys.push_back(detail::random_value(f, rng, -4, 4, 20));
    Network net = step_memorizer(f, zs, ys);
    CHECK(count_params(net) == 6ull * d * n + 2ull * n);
    for (uint32_t i = 0; i < n; ++i) {
      EvalResult r = eval(net, zs[i]);
      CHECK(same_value(r.output, ys[i]));
      CHECK(!r.flags.nan_seen);
      CHECK(!r.flags.overflow_seen);
    }
  }
  // n = 1 with y = 0: constant zero on and off the point
  std::vector<std::vector<Float>> one_z = {{one(f)}};
  std::vector<Float> zero_y = {make_zero(+1)};
  Network znet = step_memorizer(f, one_z, zero_y);
  CHECK(eval(znet, one_z[0]).output.is_zero());
  CHECK(eval(znet, {neg(one(f))}).output.is_zero());
  CHECK_THROWS_AS(step_memorizer(f, {{one(f)}, {one(f)}}, {one(f), one(f)}), DuplicateInput);
}

TEST_CASE("relu_threshold_gadget: parameters and identities") {
  Format fp4 = make_format(Kind::Fp, 4);
  auto halves = relu_threshold_gadget(fp4, one(fp4), Direction::GE);
  CHECK(count_params(halves.first) == 5);
  CHECK(count_params(halves.second) == 5);
  CHECK(same_value(indicator_sum(fp4, halves, one(fp4)), one(fp4)));
  CHECK(indicator_sum(fp4, halves, *pred(fp4, one(fp4))).is_zero());
  // every stored parameter passes the representability test
  GadgetParams g = compute_gadget_params(fp4, one(fp4), Direction::GE);
  for (const Float& wv : {g.w1x, g.b1, g.w2, g.b2_psi1, g.b2_psi2, g.scale_psi1, g.scale_psi2})
    CHECK(is_representable(fp4, to_dyadic(fp4, wv)));
  CHECK_THROWS_AS(relu_threshold_gadget(fp4, make_zero(+1), Direction::GE), ThresholdOutOfRange);
  Format fpq = make_format(Kind::Fpq, 4, 5);
  Float omega = round_dyadic(fpq, fpq.omega());
  CHECK_THROWS_AS(relu_threshold_gadget(fpq, omega, Direction::LE), ThresholdOutOfRange);
  Float kappa = round_dyadic(fpq, fpq.kappa());
  CHECK_THROWS_AS(relu_threshold_gadget(fpq, *succ(fpq, kappa), Direction::GE),
                  ThresholdOutOfRange);
  CHECK_NOTHROW(relu_threshold_gadget(fpq, kappa, Direction::GE));
}

TEST_CASE("gadget sweep: eta threshold over the full Fpq window") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Float eta = *succ(f, make_zero(+1));
  auto domains = fpq_gadget_domains(f);
  Report r = verify_gadgets(f, {eta, neg(eta)}, domains.second);
  CHECK(r.ok());
  CHECK(r.checked == 4 * domains.second.size());
}

TEST_CASE("gadget sweep: windowed Fp across precisions") {
  // every threshold with exponent in [-8, 8], x over [-12, 12] plus the
  // case-boundary successor/predecessor chains
  for (int p : {3, 4, 5}) {
    Format f = make_format(Kind::Fp, p);
    ExpWindow zw{-8, 8};
    ExpWindow xw{-12, 12};
    uint64_t m_hi = (uint64_t(2) << f.p) - 1;
    Float zbig = make_finite(1, m_hi, zw.hi);
    std::vector<Float> all = enumerate_floats(f, neg(zbig), zbig, zw);
    Report total;
    for (const Float& z : all) {
      if (z.sig == 0) continue;
      Report r = verify_gadgets(f, {z}, fp_gadget_x_domain(f, z, xw));
      total.checked += r.checked;
      total.passed += r.passed;
      if (!r.ok() && total.counterexamples.empty())
        total.counterexamples = r.counterexamples;
    }
    CAPTURE(p);
    CHECK(total.checked == total.passed);
    if (total.checked != total.passed)
      MESSAGE(total.counterexamples[0].dump());
  }
}

TEST_CASE("the doubled-resolution form at power-of-two thresholds is the reason "
          "for the shifted-knee variant") {
  // Hand-built halves with the unshifted weights: the saturated first half
  // reaches 2^{p+1}-1, outside {0} U [2^p], and a fold starting from 4 then
  // rounds 35 to 36, which is what the variant prevents.
  Format f = make_format(Kind::Fp, 4);
  Network psi1, psi2;
  for (Network* n : {&psi1, &psi2}) {
    n->format = f;
    n->activation = Activation::ReLU;
    n->input_dim = 1;
    n->layers.resize(3);
  }
  Float minus_one = neg(one(f));
  Float b1 = round_dyadic(f, Dyadic(1, BigUint(31), -4));       // (2-u) * 2^0
  Float w2 = round_dyadic(f, Dyadic(-1, BigUint(1), 4));        // -2^{p-e_z}
  Float b2a = round_dyadic(f, Dyadic(1, BigUint(31), -1));      // (2-a-u~) * 2^p
  Float b2b = round_dyadic(f, Dyadic(1, BigUint(15), 0));       // (2-a-u) * 2^p
  Float two = round_dyadic(f, Dyadic::from_int(2));
  psi1.layers[0].neurons.push_back(Neuron{{1, 2}, {minus_one, b1}});
  psi1.layers[1].neurons.push_back(Neuron{{1, 2}, {w2, b2a}});
  psi1.layers[2].neurons.push_back(Neuron{{1}, {two}});
  psi2.layers[0].neurons.push_back(Neuron{{1, 2}, {minus_one, b1}});
  psi2.layers[1].neurons.push_back(Neuron{{1, 2}, {w2, b2b}});
  psi2.layers[2].neurons.push_back(Neuron{{1}, {neg(two)}});
  Float x = round_dyadic(f, Dyadic::from_int(62));
  Float o1 = eval(psi1, {x}).output;
  Float o2 = eval(psi2, {x}).output;
  // the indicator value still holds ...
  CHECK(same_value(add(f, o1, o2), one(f)));
  // ... but the halves break the claimed output range
  CHECK(Dyadic::compare(to_dyadic(f, o1), Dyadic::from_int(31)) == 0);
  // and integer folds through 31 round: 4 (+) 31 lands on the 36 tie
  Float four = round_dyadic(f, Dyadic::from_int(4));
  OpStats st;
  Float partial = add(f, four, o1, &st);
  CHECK(st.inexact);
  CHECK(Dyadic::compare(to_dyadic(f, partial), Dyadic::from_int(36)) == 0);

  // The shipped variant keeps the same indicator with bounded halves.
  auto fixed = relu_threshold_gadget(f, one(f), Direction::GE);
  Float f1 = eval(fixed.first, {x}).output;
  CHECK(Dyadic::compare(to_dyadic(f, f1), Dyadic::from_int(3)) == 0);
  CHECK(same_value(indicator_sum(f, fixed, x), one(f)));
}

TEST_CASE("relu_memorizer: examples, boundary thresholds, zero coordinates") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Rng rng(11);
  auto zs = detail::random_inputs(f, rng, 5, 2, -6, 5, nullptr, 10);
  std::vector<Float> ys;
  for (int i = 0; i < 5; ++i) ys.push_back(detail::random_value(f, rng, -4, 4, 10));
  Network net = relu_memorizer(f, zs, ys);
  CHECK(count_params(net) == 20ull * 2 * 5 + 2ull * 5);
  for (size_t i = 0; i < zs.size(); ++i) {
    EvalResult r = eval(net, zs[i]);
    CHECK(same_value(r.output, ys[i]));
    CHECK(!r.flags.nan_seen);
  }
  // kappa and -eta boundary thresholds, and an all-zero point
  Float kappa = round_dyadic(f, f.kappa());
  Float eta = *succ(f, make_zero(+1));
  std::vector<std::vector<Float>> zb = {{kappa, neg(eta)}, {make_zero(+1), make_zero(+1)}};
  std::vector<Float> yb = {one(f), fpq_int(f, 3)};
  Network nb = relu_memorizer(f, zb, yb);
  CHECK(same_value(eval(nb, zb[0]).output, yb[0]));
  CHECK(same_value(eval(nb, zb[1]).output, yb[1]));
  CHECK(eval(nb, {one(f), one(f)}).output.is_zero());
  Float beyond = *succ(f, kappa);
  CHECK_THROWS_AS(relu_memorizer(f, {{beyond}}, {one(f)}), InputOutOfRange);
  CHECK_THROWS_AS(relu_memorizer(f, {{one(f)}, {one(f)}}, {one(f), one(f)}), DuplicateInput);

  // Fp all-zero single input: the fallback width applies
  Format fp4 = make_format(Kind::Fp, 4);
  std::vector<std::vector<Float>> z0 = {{make_zero(+1), make_zero(+1)}};
  std::vector<Float> y0 = {fpq_int(fp4, 5)};
  Network n0 = relu_memorizer(fp4, z0, y0);
  EvalResult r0 = eval(n0, z0[0]);
  CHECK(same_value(r0.output, y0[0]));
  CHECK(!r0.flags.overflow_seen);
  // off the fallback box [-1,1]^2 the indicator clears
  CHECK(eval(n0, {fpq_int(fp4, 2), make_zero(+1)}).output.is_zero());
}

TEST_CASE("relu_memorizer: fold exactness inside the no-overflow window") {
  Format f = make_format(Kind::Fpq, 4, 5);
  Rng rng(23);
  auto zs = detail::random_inputs(f, rng, 4, 3, -5, 4, nullptr, 15);
  std::vector<Float> ys;
  for (int i = 0; i < 4; ++i) ys.push_back(detail::random_value(f, rng, -3, 3, 10));
  Network net = relu_memorizer(f, zs, ys);
  std::vector<Float> axis = no_overflow_axis(f);
  // strided sample of the scan lattice; the indicator-layer folds stay exact
  for (size_t a = 0; a < axis.size(); a += 97) {
    for (size_t b = 0; b < axis.size(); b += 131) {
      std::vector<Float> x = {axis[a], axis[b], axis[(a + b) % axis.size()]};
      EvalTrace t;
      EvalResult r = eval_traced(net, x, t);
      CHECK(!r.flags.overflow_seen);
      CHECK(!r.flags.nan_seen);
      for (const NeuronTrace& nt : t.layers[2]) CHECK(nt.inexact_ops == 0);
      for (const NeuronTrace& nt : t.layers[2]) {
        Dyadic pre = to_dyadic(f, nt.pre);
        CHECK(Dyadic::compare(pre.abs(), Dyadic::scaled_pow2(1, f.p + 1)) <= 0);
      }
    }
  }
}

TEST_CASE("build_grid_plan: partition, K=1, and epsilon=0 rules") {
  Format f = make_format(Kind::Fpq, 4, 5);
  ResolutionSpec quarter;
  quarter.delta = Rational(1, BigUint(1), BigUint(4));
  GridPlan plan = build_grid_plan(f, 1, quarter, target_from_expression("x"));
  CHECK(plan.nominal_cells == 4);
  CHECK(plan.cell_count() == 4);
  // cells partition [0,1] ∩ F
  auto pts = enumerate_floats(f, make_zero(+1), one(f));
  CHECK(pts.size() == 241);
  size_t covered = 0;
  for (const Float& x : pts) {
    int hits = 0;
    for (const AxisCell& c : plan.cells)
      if (compare_finite(c.lo, x) <= 0 && compare_finite(x, c.hi) <= 0) ++hits;
    CHECK(hits == 1);
    covered += hits;
  }
  CHECK(covered == pts.size());
  // delta >= 1 gives a single cell
  ResolutionSpec wide;
  wide.delta = Rational::from_int(2);
  GridPlan single = build_grid_plan(f, 1, wide, target_from_expression("x"));
  CHECK(single.cell_count() == 1);
  // epsilon = 0 needs a finite domain
  ResolutionSpec eps0;
  eps0.epsilon = Rational();
  eps0.lipschitz = Rational::from_int(1);
  CHECK_THROWS_AS(build_grid_plan(make_format(Kind::Fp, 4), 1, eps0, target_from_expression("x")),
                  RequiresFiniteDomain);
  GridPlan fine = build_grid_plan(f, 1, eps0, target_from_expression("x"));
  // delta = max{eta, 0}: every nonempty cell is a single value
  CHECK(fine.cell_count() == pts.size());
}

TEST_CASE("step_approximator: per-cell values and parameter bound") {
  Format f = make_format(Kind::Fpq, 4, 5);
  ResolutionSpec rs;
  rs.delta = Rational(1, BigUint(1), BigUint(4));
  GridPlan plan = build_grid_plan(f, 1, rs, target_from_expression("x"));
  Network net = step_approximator(plan);
  CHECK(count_params(net) <= (6 + 2) * 4);
  auto pts = enumerate_floats(f, make_zero(+1), one(f));
  for (const Float& x : pts) {
    Float out = eval(net, {x}).output;
    CHECK(same_value(out, plan.values[plan.axis_cell_of(x)]));
  }
  // constant target: constant network output
  GridPlan cplan = build_grid_plan(f, 1, rs, target_from_expression("0.5"));
  Network cnet = step_approximator(cplan);
  for (size_t i = 0; i < pts.size(); i += 17)
    CHECK(same_value(eval(cnet, {pts[i]}).output, round_dyadic(f, Dyadic(1, BigUint(1), -1))));
  // d = 2, K = 3: the parameter bound from the count formula
  ResolutionSpec third;
  third.delta = Rational(1, BigUint(1), BigUint(3));
  GridPlan p2 = build_grid_plan(f, 2, third, target_from_expression("x1*x2"));
  CHECK(p2.nominal_cells == 3);
  Network n2 = step_approximator(p2);
  CHECK(count_params(n2) <= (6 * 2 + 2) * 9);
}

TEST_CASE("relu_approximator: bound example f* = x^2") {
  Format f = make_format(Kind::Fpq, 4, 5);
  ResolutionSpec rs;
  rs.epsilon = Rational(1, BigUint(1), BigUint(8));
  rs.lipschitz = Rational::from_int(2);
  GridPlan plan = build_grid_plan(f, 1, rs, target_from_expression("x^2"));
  Network net = relu_approximator(plan);
  CHECK(count_params(net) <= 22 * plan.nominal_cells);
  auto axis = enumerate_floats(f, make_zero(+1), one(f));
  Report rep = verify_bound(net, plan, *rs.epsilon, axis);
  CHECK(rep.ok());
  CHECK(rep.checked == axis.size());
}

TEST_CASE("relu_approximator: single-cell plan gives a constant net") {
  Format f = make_format(Kind::Fpq, 4, 5);
  ResolutionSpec wide;
  wide.delta = Rational::from_int(1);
  GridPlan plan = build_grid_plan(f, 1, wide, target_from_expression("x^2"));
  REQUIRE(plan.cell_count() == 1);
  Network net = relu_approximator(plan);
  CHECK(count_params(net) <= 22);
  auto pts = enumerate_floats(f, make_zero(+1), one(f));
  for (size_t i = 0; i < pts.size(); i += 13)
    CHECK(same_value(eval(net, {pts[i]}).output, plan.values[0]));
}

TEST_CASE("approximators under Fp: weakened lower-corner bound") {
  Format f = make_format(Kind::Fp, 4);
  ResolutionSpec rs;
  rs.epsilon = Rational(1, BigUint(1), BigUint(8));
  rs.lipschitz = Rational::from_int(2);
  GridPlan plan = build_grid_plan(f, 1, rs, target_from_expression("x^2"));
  CHECK(plan.fp_lower_corner);
  ExpWindow w{-10, 0};
  auto axis = enumerate_floats(f, make_zero(+1), one(f), w);
  for (Network net : {step_approximator(plan), relu_approximator(plan)}) {
    Report rep = verify_bound(net, plan, *rs.epsilon, axis);
    CHECK(rep.ok());
  }
}

TEST_CASE("naive_relu_indicator: structure") {
  Format f = make_format(Kind::Fp, 4);
  Network net = naive_relu_indicator(f);
  CHECK(net.layers.size() == 2);
  CHECK(count_params(net) == 6);
  CHECK(same_value(eval(net, {one(f)}).output, one(f)));
  CHECK(eval(net, {*pred(f, *pred(f, one(f)))}).output.is_zero());
}
