#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floatnet/verifier.hpp"

namespace floatnet {

// Randomized memorization battery: draws datasets, builds the Step or ReLU
// memorizer, and checks bit-exact reproduction, parameter-count equality,
// flag cleanliness, and (Fpq ReLU) the no-overflow scan.
struct MemorizationConfig {
  uint32_t trials = 100;
  uint32_t max_n = 20;
  uint32_t max_d = 3;
  uint64_t seed = 1;
  bool run_overflow_scan = true;   // Fpq ReLU only
  uint64_t scan_budget = 10000;    // lattice points for d >= 2
};

namespace detail {

// A random canonical value with exponent in [e_lo, e_hi]; occasionally zero.
inline Float random_value(const Format& f, Rng& rng, int64_t e_lo, int64_t e_hi,
                          uint32_t zero_percent) {
  if (rng.below(100) < zero_percent) return make_zero(+1);
  int64_t e = e_lo + static_cast<int64_t>(rng.below(static_cast<uint64_t>(e_hi - e_lo + 1)));
  uint64_t m = (uint64_t(1) << f.p) + rng.below(uint64_t(1) << f.p);
  int sign = rng.below(2) ? 1 : -1;
  if (f.kind == Kind::Fpq && e < f.e_min) {
    // fold into a subnormal
    m >>= (f.e_min - e);
    e = f.e_min;
    if (m == 0) m = 1;
  }
  return make_finite(sign, m, e);
}

inline std::vector<std::vector<Float>> random_inputs(const Format& f, Rng& rng, uint32_t n,
                                                     uint32_t d, int64_t e_lo, int64_t e_hi,
                                                     const Float* boundary, uint32_t boundary_pct) {
  std::vector<std::vector<Float>> zs;
  zs.reserve(n);
  auto contains = [&](const std::vector<Float>& z) {
    for (const auto& w : zs) {
      bool eq = true;
      for (uint32_t j = 0; j < d; ++j)
        if (!same_value(w[j], z[j])) {
          eq = false;
          break;
        }
      if (eq) return true;
    }
    return false;
  };
  while (zs.size() < n) {
    std::vector<Float> z(d);
    for (uint32_t j = 0; j < d; ++j) {
      if (boundary && rng.below(100) < boundary_pct) {
        z[j] = rng.below(2) ? *boundary : neg(*boundary);
      } else {
        z[j] = random_value(f, rng, e_lo, e_hi, 10);
      }
    }
    if (!contains(z)) zs.push_back(std::move(z));
  }
  return zs;
}

}  // namespace detail

inline Report memorization_suite(const Format& f, Activation act, const MemorizationConfig& cfg) {
  detail::Stopwatch sw;
  Report rep;
  rep.suite = std::string("memorize.") + activation_name(act);
  rep.format = f.spec_string();
  rep.domain = std::to_string(cfg.trials) + " random datasets, n <= " +
               std::to_string(cfg.max_n) + ", d <= " + std::to_string(cfg.max_d) + ", seed " +
               std::to_string(cfg.seed);
  Rng rng(cfg.seed);
  const bool relu_fpq = act == Activation::ReLU && f.kind == Kind::Fpq;
  Float kappa_f;
  std::vector<Float> scan_axis;
  if (relu_fpq) {
    kappa_f = detail::float_exact(f, f.kappa());
    if (cfg.run_overflow_scan) scan_axis = no_overflow_axis(f);
  }
  for (uint32_t t = 0; t < cfg.trials; ++t) {
    uint32_t n = 1 + static_cast<uint32_t>(rng.below(cfg.max_n));
    uint32_t d = 1 + static_cast<uint32_t>(rng.below(cfg.max_d));
    int64_t e_lo = f.kind == Kind::Fpq ? std::max<int64_t>(f.e_min, -8) : -8;
    int64_t e_hi = relu_fpq ? norm_exp(f, kappa_f) - 1 : 8;
    if (f.kind == Kind::Fpq && !relu_fpq) e_hi = std::min<int64_t>(f.e_max - 2, 8);
    auto zs = detail::random_inputs(f, rng, n, d, e_lo, e_hi,
                                    relu_fpq ? &kappa_f : nullptr, relu_fpq ? 3 : 0);
    std::vector<Float> ys(n);
    for (uint32_t i = 0; i < n; ++i) ys[i] = detail::random_value(f, rng, -4, 4, 15);
    Network net = act == Activation::Step ? step_memorizer(f, zs, ys) : relu_memorizer(f, zs, ys);
    uint64_t want_params = act == Activation::Step ? 6ull * d * n + 2ull * n
                                                   : 20ull * d * n + 2ull * n;
    bool params_ok = count_params(net) == want_params;
    Report mem = verify_memorization(net, zs, ys);
    bool scan_ok = true;
    uint64_t scanned = 0;
    if (relu_fpq && cfg.run_overflow_scan) {
      Report scan = overflow_scan(net, scan_axis, d == 1 ? scan_axis.size() : cfg.scan_budget);
      scan_ok = scan.ok();
      scanned = scan.checked;
    }
    rep.record(params_ok && mem.ok() && scan_ok, [&] {
      return nlohmann::json{{"trial", t},
                            {"n", n},
                            {"d", d},
                            {"params", count_params(net)},
                            {"params_expected", want_params},
                            {"memorized", mem.passed},
                            {"of", mem.checked},
                            {"scan_ok", scan_ok},
                            {"scanned", scanned}};
    });
  }
  if (act == Activation::ReLU)
    rep.notes.push_back("parameter count asserted as the exact layer tally "
                        "8dn + 8dn + (4d+1)n + n = 20dn+2n; the looser 20dn+5n "
                        "bound sometimes quoted for this construction over-counts");
  rep.wall_ms = sw.ms();
  return rep;
}

// One named approximation target with its Lipschitz constant on [0,1]^d.
struct ApproxTarget {
  std::string expr;
  uint32_t d;
  Rational lipschitz;
};

inline std::vector<ApproxTarget> standard_targets() {
  return {
      {"x", 1, Rational::from_int(1)},
      {"x^2", 1, Rational::from_int(2)},
      {"x1*x2", 2, Rational::from_int(2)},
      {"abs(2*x-1)", 1, Rational::from_int(2)},
  };
}

// Approximation-bound battery over the standard targets. Exhaustive on
// [0,1]^d for Fpq; windowed exhaustive for Fp.
inline Report approximation_suite(const Format& f, Activation act,
                                  const std::vector<Rational>& epsilons,
                                  const ExpWindow* fp_window = nullptr,
                                  uint32_t max_d = 2) {
  detail::Stopwatch sw;
  Report rep;
  rep.suite = std::string("approx.") + activation_name(act);
  rep.format = f.spec_string();
  std::vector<Float> axis;
  if (f.kind == Kind::Fpq) {
    axis = enumerate_floats(f, make_zero(+1), one(f));
  } else {
    if (!fp_window) throw UnboundedEnumeration("Fp approximation sweeps need an exponent window");
    axis = enumerate_floats(f, make_zero(+1), one(f), *fp_window);
  }
  rep.domain = "[0,1]^d with " + std::to_string(axis.size()) + " axis values";
  for (const ApproxTarget& target : standard_targets()) {
    if (target.d > max_d) continue;
    for (const Rational& eps : epsilons) {
      ResolutionSpec rs;
      rs.epsilon = eps;
      rs.lipschitz = target.lipschitz;
      GridPlan plan = build_grid_plan(f, target.d, rs, target_from_expression(target.expr));
      Network net = act == Activation::Step ? step_approximator(plan) : relu_approximator(plan);
      uint64_t bound = (act == Activation::Step ? 6ull * target.d + 2 : 20ull * target.d + 2);
      for (uint32_t j = 0; j < target.d; ++j) bound *= plan.nominal_cells;
      bool params_ok = count_params(net) <= bound;
      Report b = verify_bound(net, plan, eps, axis);
      rep.record(params_ok && b.ok(), [&] {
        return nlohmann::json{{"target", target.expr},
                              {"epsilon", eps.to_string()},
                              {"params", count_params(net)},
                              {"param_bound", bound},
                              {"bound_ok", b.passed},
                              {"of", b.checked}};
      });
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// epsilon = 0 exactness battery (Fpq only): the approximator reproduces
// [[f*(x)]] at every domain point.
inline Report epsilon_zero_suite(const Format& f, Activation act) {
  detail::Stopwatch sw;
  Report rep;
  rep.suite = std::string("approx.eps0.") + activation_name(act);
  rep.format = f.spec_string();
  if (f.kind != Kind::Fpq) throw RequiresFiniteDomain("epsilon = 0 needs Fpq");
  std::vector<Float> axis = enumerate_floats(f, make_zero(+1), one(f));
  rep.domain = "[0,1] with " + std::to_string(axis.size()) + " values, d = 1";
  for (const ApproxTarget& target : standard_targets()) {
    if (target.d != 1) continue;
    ResolutionSpec rs;
    rs.epsilon = Rational();
    rs.lipschitz = target.lipschitz;
    GridPlan plan = build_grid_plan(f, 1, rs, target_from_expression(target.expr));
    Network net = act == Activation::Step ? step_approximator(plan) : relu_approximator(plan);
    Report ex = verify_pointwise_rounding(net, plan, axis);
    rep.record(ex.ok(), [&] {
      return nlohmann::json{{"target", target.expr}, {"exact", ex.passed}, {"of", ex.checked}};
    });
  }
  rep.wall_ms = sw.ms();
  return rep;
}

}  // namespace floatnet
