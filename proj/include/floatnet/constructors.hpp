#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "floatnet/enumerate.hpp"
#include "floatnet/errors.hpp"
#include "floatnet/funcexpr.hpp"
#include "floatnet/lemmas.hpp"
#include "floatnet/network.hpp"
#include "floatnet/round.hpp"

namespace floatnet {

namespace detail {

// Convert an exactly representable dyadic to its Float; the gadget parameter
// derivations guarantee representability, so a miss is an internal bug.
inline Float float_exact(const Format& f, const Dyadic& d) {
  bool inexact = false;
  Float v = round_dyadic(f, d, &inexact);
  if (inexact || !v.is_finite())
    throw DomainError("internal: value " + d.to_string() + " not representable in " +
                      f.spec_string());
  return v;
}

inline Float pow2_float(const Format& f, int64_t e) {
  return float_exact(f, Dyadic::scaled_pow2(1, e));
}

}  // namespace detail

enum class Direction : uint8_t { GE, LE };

// Derived constants of the ReLU threshold gadget for a threshold z, from a
// case analysis on the threshold's normalized form. All five realized weights
// per half-gadget pass the representability test.
struct GadgetParams {
  Float z;
  Direction direction = Direction::GE;
  int64_t ez = 0;      // normalized exponent of |z|
  Dyadic az;           // normalized significand of |z|, in [1,2)
  int64_t cz = 0;      // max{0, e_min - ez}; 0 for Fp
  Dyadic u0;
  Dyadic u_tilde;
  int c_tilde = 0;
  int64_t k = 0;
  // Realized layer weights: psi(x) = scale (x) ReLU(w2 (x) ReLU(w1x (x) x (+) b1) (+) b2).
  Float w1x, b1;
  Float w2, b2_psi1, b2_psi2;
  Float scale_psi1, scale_psi2;
};

inline GadgetParams compute_gadget_params(const Format& f, const Float& z, Direction dir) {
  if (!z.is_finite() || z.sig == 0) throw ThresholdOutOfRange("gadget threshold must be nonzero");
  if (!is_canonical(f, z)) throw FormatMismatch("threshold is not a value of the format");
  if (f.kind == Kind::Fpq) {
    Dyadic kap = f.kappa();
    if (Dyadic::compare(to_dyadic(f, z).abs(), kap) > 0)
      throw ThresholdOutOfRange("|z| exceeds kappa = " + kap.to_string());
  }
  GadgetParams g;
  g.z = z;
  g.direction = dir;
  Float za = abs_value(z);
  NormalizedView nv = normalized_view(f, za);
  g.ez = nv.exp;
  g.az = Dyadic(1, BigUint(nv.sig_odd), -(nv.sig_bits - 1));
  g.cz = f.kind == Kind::Fpq ? nv.c : 0;
  const Dyadic u = f.unit_roundoff();
  if (f.kind == Kind::Fp) {
    g.u0 = u;
    g.k = 0;
  } else {
    g.u0 = g.ez >= f.e_min ? u : Dyadic::scaled_pow2(1, -f.p + g.cz);
    g.k = g.ez <= 0 ? (3 - f.p - f.e0() - g.cz) : (-f.p + f.e0());
  }
  bool az_is_one = Dyadic::compare(g.az, Dyadic::from_int(1)) == 0;
  bool eta_case = f.kind == Kind::Fpq && g.ez == -f.p + f.e_min;
  if (az_is_one && !eta_case) {
    g.u_tilde = g.u0;
    g.u_tilde.exp2 -= 1;
    g.c_tilde = 1;
  } else {
    g.u_tilde = Dyadic();
    g.c_tilde = 0;
  }

  const Dyadic two = Dyadic::from_int(2);
  Dyadic pow_pk = Dyadic::scaled_pow2(1, f.p + g.k);
  // Weights of the |z|-form GE and LE halves.
  Dyadic ge_b1 = Dyadic::mul(Dyadic::sub(two, g.u0), Dyadic::scaled_pow2(1, g.ez));
  Dyadic w2 = Dyadic::scaled_pow2(-1, f.p - g.ez + g.k);
  Dyadic ge_b2_1 = Dyadic::mul(Dyadic::sub(Dyadic::sub(two, g.az), g.u_tilde), pow_pk);
  Dyadic ge_b2_2 = Dyadic::mul(Dyadic::sub(Dyadic::sub(two, g.az), g.u0), pow_pk);
  Dyadic ge_scale = Dyadic::scaled_pow2(1, g.c_tilde - g.cz - g.k);
  if (az_is_one && !eta_case) {
    // Power-of-two threshold. The doubled-resolution form above saturates at
    // (2 - a_z - u_tilde) * 2^{p + c_tilde - c_z} = 2^{p+1} - 1, outside
    // {0} U [2^p]; large partial sums then hit ties and the downstream
    // integer-exactness argument breaks (observable as failed memorization
    // from d = 5 on). Shifting the first-layer knee to succ(z) keeps the same
    // shape with outputs in {0, 1, 3} / {0, -2}:
    //   g(x) = ReLU(succ(z) (-) x),  psi = +-S (x) ReLU((-w2 (x) g) (+) b)
    //   with b = 3 * 2^{k+c_z-1} resp. 2^{k+c_z} and S = 2^{1-k-c_z}.
    ge_b1 = Dyadic::add(Dyadic::scaled_pow2(1, g.ez),
                        Dyadic::mul(g.u0, Dyadic::scaled_pow2(1, g.ez)));
    ge_b2_1 = Dyadic(1, BigUint(3), g.k + g.cz - 1);
    ge_b2_2 = Dyadic::scaled_pow2(1, g.k + g.cz);
    ge_scale = Dyadic::scaled_pow2(1, 1 - g.k - g.cz);
  }
  Dyadic le_b1 = Dyadic::scaled_pow2(-1, g.ez);
  Dyadic le_b2_1 = Dyadic::mul(Dyadic::add(Dyadic::sub(g.az, Dyadic::from_int(1)), g.u0), pow_pk);
  Dyadic le_b2_2 = Dyadic::mul(Dyadic::sub(g.az, Dyadic::from_int(1)), pow_pk);
  Dyadic le_scale = Dyadic::scaled_pow2(1, -g.cz - g.k);

  const bool positive = z.sign > 0;
  const bool ge_form = (dir == Direction::GE) == positive;
  // ge_form: the |z|-GE layer stack; otherwise the |z|-LE stack. For z < 0 the
  // input is negated, which only flips the first-layer x weight.
  int x_sign = positive ? 1 : -1;
  g.w2 = detail::float_exact(f, w2);
  if (ge_form) {
    g.w1x = detail::float_exact(f, Dyadic::from_int(-x_sign));
    g.b1 = detail::float_exact(f, ge_b1);
    g.b2_psi1 = detail::float_exact(f, ge_b2_1);
    g.b2_psi2 = detail::float_exact(f, ge_b2_2);
    g.scale_psi1 = detail::float_exact(f, ge_scale);
    g.scale_psi2 = detail::float_exact(f, ge_scale.negated());
  } else {
    g.w1x = detail::float_exact(f, Dyadic::from_int(x_sign));
    g.b1 = detail::float_exact(f, le_b1);
    g.b2_psi1 = detail::float_exact(f, le_b2_1);
    g.b2_psi2 = detail::float_exact(f, le_b2_2);
    g.scale_psi1 = detail::float_exact(f, le_scale);
    g.scale_psi2 = detail::float_exact(f, le_scale.negated());
  }
  return g;
}

namespace detail {

inline Network gadget_half_network(const Format& f, const GadgetParams& g, bool first_half) {
  Network net;
  net.format = f;
  net.activation = Activation::ReLU;
  net.input_dim = 1;
  net.layers.resize(3);
  net.layers[0].neurons.push_back(Neuron{{1, 2}, {g.w1x, g.b1}});
  net.layers[1].neurons.push_back(
      Neuron{{1, 2}, {g.w2, first_half ? g.b2_psi1 : g.b2_psi2}});
  net.layers[2].neurons.push_back(Neuron{{1}, {first_half ? g.scale_psi1 : g.scale_psi2}});
  return net;
}

}  // namespace detail

// The two 3-layer, 5-parameter ReLU halves whose floating-point sum
// psi1(x) (+) psi2(x) equals 1{x >= z} (or 1{x <= z}).
inline std::pair<Network, Network> relu_threshold_gadget(const Format& f, const Float& z,
                                                         Direction dir) {
  GadgetParams g = compute_gadget_params(f, z, dir);
  return {detail::gadget_half_network(f, g, true), detail::gadget_half_network(f, g, false)};
}

// ---- Step constructions -----------------------------------------------------

namespace detail {

inline void check_dimension(const Format& f, size_t d) {
  if (d == 0) throw ShapeMismatch("dimension must be positive");
  if (f.p <= 32 && d > (uint64_t(1) << f.p))
    throw DimensionTooLarge("d exceeds 2^p = " + std::to_string(uint64_t(1) << f.p));
}

inline Float int_float(const Format& f, int64_t v) {
  return float_exact(f, Dyadic::from_int(v));
}

inline void check_input_value(const Format& f, const Float& v) {
  if (!v.is_finite() || !is_canonical(f, v))
    throw FormatMismatch("value is not a finite value of the format");
}

}  // namespace detail

// Step network computing 1{x in prod [alpha_i, beta_i]} with 3 layers and
// exactly 6d+2 parameters.
inline Network step_cube_indicator(const Format& f, const std::vector<Float>& alpha,
                                   const std::vector<Float>& beta) {
  if (alpha.size() != beta.size()) throw ShapeMismatch("alpha/beta dimension mismatch");
  const uint32_t d = static_cast<uint32_t>(alpha.size());
  detail::check_dimension(f, d);
  for (uint32_t j = 0; j < d; ++j) {
    detail::check_input_value(f, alpha[j]);
    detail::check_input_value(f, beta[j]);
    if (compare_finite(alpha[j], beta[j]) > 0)
      throw DomainError("alpha_i must not exceed beta_i");
  }
  Network net;
  net.format = f;
  net.activation = Activation::Step;
  net.input_dim = d;
  net.layers.resize(3);
  Float minus_one = detail::int_float(f, -1);
  Float plus_one = one(f);
  for (uint32_t j = 0; j < d; ++j) {
    // g_{2j-1} = 1{-x_j (+) beta_j >= 0}, g_{2j} = 1{x_j (-) alpha_j >= 0}.
    net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {minus_one, beta[j]}});
    net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {plus_one, neg(alpha[j])}});
  }
  Neuron sum;
  for (uint32_t i = 1; i <= 2 * d; ++i) {
    sum.indices.push_back(i);
    sum.weights.push_back(plus_one);
  }
  sum.indices.push_back(2 * d + 1);
  sum.weights.push_back(detail::int_float(f, -2 * static_cast<int64_t>(d)));
  net.layers[1].neurons.push_back(std::move(sum));
  net.layers[2].neurons.push_back(Neuron{{1}, {plus_one}});
  return net;
}

namespace detail {

inline void check_dataset(const Format& f, const std::vector<std::vector<Float>>& zs,
                          const std::vector<Float>& ys) {
  if (zs.empty()) throw ShapeMismatch("empty dataset");
  if (zs.size() != ys.size()) throw ShapeMismatch("input/output count mismatch");
  size_t d = zs[0].size();
  if (d == 0) throw ShapeMismatch("dataset with zero-dimensional inputs");
  for (const auto& z : zs) {
    if (z.size() != d) throw ShapeMismatch("ragged dataset");
    for (const Float& v : z) check_input_value(f, v);
  }
  for (const Float& y : ys) check_input_value(f, y);
  for (size_t i = 0; i < zs.size(); ++i) {
    for (size_t j = i + 1; j < zs.size(); ++j) {
      bool equal = true;
      for (size_t c = 0; c < d; ++c) {
        if (!same_value(zs[i][c], zs[j][c])) {
          equal = false;
          break;
        }
      }
      if (equal)
        throw DuplicateInput("dataset inputs " + std::to_string(i) + " and " + std::to_string(j) +
                             " coincide");
    }
  }
}

}  // namespace detail

// Step memorizer: 3 layers, 6dn+2n parameters, f(z_i) = y_i exactly.
inline Network step_memorizer(const Format& f, const std::vector<std::vector<Float>>& zs,
                              const std::vector<Float>& ys) {
  detail::check_dataset(f, zs, ys);
  const uint32_t d = static_cast<uint32_t>(zs[0].size());
  const uint32_t n = static_cast<uint32_t>(zs.size());
  detail::check_dimension(f, d);
  Network net;
  net.format = f;
  net.activation = Activation::Step;
  net.input_dim = d;
  net.layers.resize(3);
  Float minus_one = detail::int_float(f, -1);
  Float plus_one = one(f);
  Float minus_2d = detail::int_float(f, -2 * static_cast<int64_t>(d));
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < d; ++j) {
      const Float& z = zs[i][j];
      net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {minus_one, z}});
      net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {plus_one, neg(z)}});
    }
    Neuron sum;
    for (uint32_t t = 0; t < 2 * d; ++t) {
      sum.indices.push_back(i * 2 * d + t + 1);
      sum.weights.push_back(plus_one);
    }
    sum.indices.push_back(2 * d * n + 1);
    sum.weights.push_back(minus_2d);
    net.layers[1].neurons.push_back(std::move(sum));
  }
  Neuron out;
  for (uint32_t i = 0; i < n; ++i) {
    out.indices.push_back(i + 1);
    out.weights.push_back(ys[i]);
  }
  net.layers[2].neurons.push_back(std::move(out));
  return net;
}

// ---- Grid plans -------------------------------------------------------------

// Either an explicit cell width delta, or (epsilon, Lipschitz constant) from
// which delta = epsilon / L certifies omega^{-1}(epsilon) from below.
struct ResolutionSpec {
  std::optional<Rational> delta;
  std::optional<Rational> epsilon;
  std::optional<Rational> lipschitz;
};

struct AxisCell {
  Float lo;     // alpha_{i-1}^{(>=,F)}
  Float hi;     // alpha_i^{(<,F)} (last cell: 1)
  Float upper;  // succ(hi): the next threshold, alpha_i^{(>=,F)} or 1^{(>,F)}
};

struct GridPlan {
  Format format;
  uint32_t d = 0;
  Rational delta;
  uint64_t nominal_cells = 0;  // K before empty-cell removal
  std::vector<AxisCell> cells;
  std::vector<std::vector<Float>> gammas;  // one representative per multi-index, row-major
  std::vector<Float> values;               // [[f*(gamma)]]
  TargetFn target;
  bool fp_lower_corner = false;

  uint64_t cell_count() const { return cells.size(); }
  uint64_t multi_cell_count() const { return gammas.size(); }

  // Row-major flattening of a multi-index (0-based coordinates).
  uint64_t flat_index(const std::vector<uint32_t>& iota) const {
    uint64_t idx = 0;
    for (uint32_t c : iota) idx = idx * cells.size() + c;
    return idx;
  }

  // Which axis cell contains x (x in [0,1] ∩ F); by construction exactly one.
  uint32_t axis_cell_of(const Float& x) const {
    for (uint32_t i = 0; i < cells.size(); ++i) {
      if (compare_finite(cells[i].lo, x) <= 0 && compare_finite(x, cells[i].hi) <= 0) return i;
    }
    throw DomainError("value outside [0,1] grid");
  }
};

inline GridPlan build_grid_plan(const Format& f, uint32_t d, const ResolutionSpec& spec,
                                TargetFn target) {
  detail::check_dimension(f, d);
  if (!target) throw OracleFailure("no target oracle supplied");
  Rational delta_user;
  if (spec.delta) {
    if (spec.epsilon || spec.lipschitz)
      throw ConfigError("give either delta or (epsilon, lipschitz), not both");
    delta_user = *spec.delta;
    if (delta_user.sign <= 0) throw DomainError("delta must be positive");
  } else {
    if (!spec.epsilon || !spec.lipschitz)
      throw ConfigError("resolution requires delta or both epsilon and lipschitz");
    if (spec.epsilon->sign < 0) throw DomainError("epsilon must be nonnegative");
    if (spec.lipschitz->sign <= 0) throw DomainError("lipschitz constant must be positive");
    delta_user = Rational::div(*spec.epsilon, *spec.lipschitz);
  }
  if (delta_user.is_zero() && f.kind == Kind::Fp)
    throw RequiresFiniteDomain("epsilon = 0 requires a finite domain; only Fpq admits it");

  GridPlan plan;
  plan.format = f;
  plan.d = d;
  plan.target = std::move(target);
  plan.fp_lower_corner = f.kind == Kind::Fp;
  // delta = max{eta, omega^{-1}(epsilon)} under Fpq; Fp uses the caller's delta.
  plan.delta = delta_user;
  if (f.kind == Kind::Fpq) {
    Rational eta_r = Rational::from_dyadic(f.eta());
    if (Rational::compare(plan.delta, eta_r) < 0) plan.delta = eta_r;
  }
  const Rational one_r = Rational::from_int(1);
  uint64_t K = 1;
  if (Rational::compare(plan.delta, one_r) < 0) {
    BigUint q, r;
    BigUint::divmod(plan.delta.den, plan.delta.num, q, r);
    if (!r.is_zero()) q = BigUint::add(q, BigUint(1));
    if (q.bit_length() > 22) throw DomainError("approximation grid too fine");
    K = q.to_u64();
  }
  plan.nominal_cells = K;

  for (uint64_t i = 1; i <= K; ++i) {
    Rational lo_r = Rational::mul(Rational::from_int(static_cast<int64_t>(i - 1)), plan.delta);
    AxisCell cell;
    cell.lo = float_ge(f, lo_r);
    if (i < K) {
      Rational hi_r = Rational::mul(Rational::from_int(static_cast<int64_t>(i)), plan.delta);
      cell.hi = float_lt(f, hi_r);
    } else {
      cell.hi = float_le(f, one_r);
    }
    if (compare_finite(cell.lo, cell.hi) > 0) continue;  // empty cell, re-indexed away
    auto up = succ(f, cell.hi);
    if (!up) throw DomainError("no threshold above the last cell");
    cell.upper = *up;
    plan.cells.push_back(cell);
  }
  if (plan.cells.empty()) throw DomainError("grid has no nonempty cells");

  const uint64_t C = plan.cells.size();
  uint64_t total = 1;
  for (uint32_t j = 0; j < d; ++j) {
    if (total > (uint64_t(1) << 26) / C) throw DomainError("grid has too many cells");
    total *= C;
  }

  // Per-axis float lists for the argmin search (Fpq only).
  std::vector<std::vector<Float>> axis_floats;
  if (f.kind == Kind::Fpq) {
    axis_floats.reserve(C);
    for (const AxisCell& cell : plan.cells)
      axis_floats.push_back(enumerate_floats(f, cell.lo, cell.hi));
  }

  plan.gammas.reserve(total);
  plan.values.reserve(total);
  std::vector<uint32_t> iota(d, 0);
  std::vector<Rational> point(d);
  for (uint64_t flat = 0; flat < total; ++flat) {
    std::vector<Float> gamma(d);
    if (plan.fp_lower_corner) {
      // Lemma-of-best-rounding is non-constructive over Fp; take the cell's
      // lower corner and verify the correspondingly weakened bound.
      for (uint32_t j = 0; j < d; ++j) gamma[j] = plan.cells[iota[j]].lo;
    } else {
      // Exact argmin of |f*(x) - [[f*(x)]]| over the finite cell; ties keep
      // the first point in row-major enumeration order.
      std::vector<size_t> pos(d, 0);
      std::optional<Rational> best_err;
      std::vector<Float> cur(d);
      bool done = false;
      while (!done) {
        for (uint32_t j = 0; j < d; ++j) {
          cur[j] = axis_floats[iota[j]][pos[j]];
          point[j] = to_rational(f, cur[j]);
        }
        Rational fx = plan.target(point);
        Float rounded = round_rational(f, fx);
        if (!rounded.is_finite())
          throw OracleFailure("target value overflows the format at a grid point");
        Rational err = Rational::sub(fx, to_rational(f, rounded)).abs();
        if (!best_err || Rational::compare(err, *best_err) < 0) {
          best_err = err;
          gamma = cur;
        }
        done = true;
        for (uint32_t j = d; j-- > 0;) {
          if (++pos[j] < axis_floats[iota[j]].size()) {
            done = false;
            break;
          }
          pos[j] = 0;
        }
      }
    }
    for (uint32_t j = 0; j < d; ++j) point[j] = to_rational(f, gamma[j]);
    Float value = round_rational(f, plan.target(point));
    if (!value.is_finite()) throw OracleFailure("rounded cell value is not finite");
    plan.gammas.push_back(std::move(gamma));
    plan.values.push_back(value);
    // advance iota
    uint32_t j = d;
    while (j > 0) {
      --j;
      if (++iota[j] < C) break;
      iota[j] = 0;
    }
  }
  return plan;
}

// ---- Grid-based approximators ----------------------------------------------

// Step approximator: 3 layers, at most (6d+2)K^d parameters, evaluating to the
// cell value [[f*(gamma)]] on every cell.
inline Network step_approximator(const GridPlan& plan) {
  const Format& f = plan.format;
  const uint32_t d = plan.d;
  const uint64_t C = plan.cells.size();
  Network net;
  net.format = f;
  net.activation = Activation::Step;
  net.input_dim = d;
  net.layers.resize(3);
  Float plus_one = one(f);
  Float minus_one = detail::int_float(f, -1);
  Float minus_d = detail::int_float(f, -static_cast<int64_t>(d));
  Float zero = make_zero(+1);
  std::vector<uint32_t> iota(d, 0);
  const uint64_t total = plan.multi_cell_count();
  for (uint64_t flat = 0; flat < total; ++flat) {
    uint32_t base = static_cast<uint32_t>(net.layers[0].neurons.size());
    Neuron sum;
    for (uint32_t j = 0; j < d; ++j) {
      const AxisCell& cell = plan.cells[iota[j]];
      // h_{2j-1}: 1{x >= lower threshold}; the first cell's lower bound is 0.
      if (iota[j] == 0) {
        net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {plus_one, zero}});
      } else {
        net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {plus_one, neg(cell.lo)}});
      }
      // h_{2j}: -1{x >= upper threshold}.
      net.layers[0].neurons.push_back(Neuron{{j + 1, d + 1}, {plus_one, neg(cell.upper)}});
      sum.indices.push_back(base + 2 * j + 1);
      sum.weights.push_back(plus_one);
      sum.indices.push_back(base + 2 * j + 2);
      sum.weights.push_back(minus_one);
    }
    sum.indices.push_back(static_cast<uint32_t>(2 * d * total) + 1);
    sum.weights.push_back(minus_d);
    net.layers[1].neurons.push_back(std::move(sum));
    uint32_t j = d;
    while (j > 0) {
      --j;
      if (++iota[j] < C) break;
      iota[j] = 0;
    }
  }
  Neuron out;
  for (uint64_t i = 0; i < total; ++i) {
    out.indices.push_back(static_cast<uint32_t>(i) + 1);
    out.weights.push_back(plan.values[i]);
  }
  net.layers[2].neurons.push_back(std::move(out));
  return net;
}

// ---- ReLU constructions -----------------------------------------------------

namespace detail {

// One signed half-pair of gadget layers appended to a 4-layer ReLU net under
// construction. Returns the pair of signed output weights for the block's
// third-layer fold, in fold order.
struct GadgetBlockWeights {
  Float w_psi1, w_psi2;
};

inline GadgetBlockWeights append_gadget_pair(Network& net, uint32_t input_index,
                                             const GadgetParams& g, int sign) {
  Layer& l1 = net.layers[0];
  Layer& l2 = net.layers[1];
  // Each 5-parameter half keeps its own first-layer neuron so the block
  // counts 20d parameters; the two first layers compute the same value.
  uint32_t l1_index = static_cast<uint32_t>(l1.neurons.size()) + 1;
  l1.neurons.push_back(Neuron{{input_index, net.input_dim + 1}, {g.w1x, g.b1}});
  l1.neurons.push_back(Neuron{{input_index, net.input_dim + 1}, {g.w1x, g.b1}});
  l2.neurons.push_back(Neuron{{l1_index, 0}, {g.w2, g.b2_psi1}});
  l2.neurons.push_back(Neuron{{l1_index + 1, 0}, {g.w2, g.b2_psi2}});
  GadgetBlockWeights w;
  w.w_psi1 = sign > 0 ? g.scale_psi1 : neg(g.scale_psi1);
  w.w_psi2 = sign > 0 ? g.scale_psi2 : neg(g.scale_psi2);
  return w;
}

}  // namespace detail

// ReLU memorizer: 4 layers, 20dn+2n parameters, f(z_i) = y_i exactly; under
// Fpq inputs must satisfy ||z||_inf <= kappa and evaluation stays
// overflow-free for ||x||_inf <= (2-u) * 2^{-3+2^{q-2}}.
inline Network relu_memorizer(const Format& f, const std::vector<std::vector<Float>>& zs,
                              const std::vector<Float>& ys) {
  detail::check_dataset(f, zs, ys);
  const uint32_t d = static_cast<uint32_t>(zs[0].size());
  const uint32_t n = static_cast<uint32_t>(zs.size());
  detail::check_dimension(f, d);

  Float kappa_f;
  Float eta_f;
  if (f.kind == Kind::Fpq) {
    kappa_f = detail::float_exact(f, f.kappa());
    eta_f = detail::float_exact(f, f.eta());
    for (const auto& z : zs)
      for (const Float& v : z)
        if (compare_finite(abs_value(v), kappa_f) > 0)
          throw InputOutOfRange("|z| exceeds kappa for the Fpq ReLU memorizer");
  }

  // Fp fallback width for zero coordinates: half the smallest nonzero |z|.
  Float fp_delta;
  if (f.kind == Kind::Fp) {
    std::optional<Float> min_abs;
    for (const auto& z : zs)
      for (const Float& v : z)
        if (v.sig != 0 && (!min_abs || compare_finite(abs_value(v), *min_abs) < 0))
          min_abs = abs_value(v);
    if (min_abs) {
      fp_delta = make_finite(1, min_abs->sig, min_abs->exp - 1);
    } else {
      fp_delta = one(f);  // every coordinate is zero; any positive width works
    }
  }

  Network net;
  net.format = f;
  net.activation = Activation::ReLU;
  net.input_dim = d;
  net.layers.resize(4);
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<detail::GadgetBlockWeights> fold;
    fold.reserve(2 * d);
    int64_t zero_coords = 0;
    for (uint32_t j = 0; j < d; ++j) {
      const Float& z = zs[i][j];
      if (f.kind == Kind::Fp) {
        Float t1 = z.sig != 0 ? z : neg(fp_delta);
        Float t2 = z.sig != 0 ? *succ(f, z) : *succ(f, fp_delta);
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, t1, Direction::GE), +1));
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, t2, Direction::GE), -1));
        continue;
      }
      if (z.sig == 0) {
        // 1{x = 0} - 1 as -1{x <= -eta} - 1{x >= eta}; compensated in the bias.
        ++zero_coords;
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, neg(eta_f), Direction::LE), -1));
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, eta_f, Direction::GE), -1));
      } else if (same_value(z, kappa_f)) {
        // z = kappa: succ(z) is out of gadget range; 1{x = kappa} via <=.
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, z, Direction::LE), +1));
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, *pred(f, z), Direction::LE), -1));
      } else if (same_value(z, neg(eta_f))) {
        // z = -eta: succ(z) = 0 is not a valid threshold; 1{x = -eta} via <=.
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, z, Direction::LE), +1));
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, *pred(f, z), Direction::LE), -1));
      } else {
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, z, Direction::GE), +1));
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, *succ(f, z), Direction::GE), -1));
      }
    }
    // Third layer: fold of the 4d signed half outputs, then the bias.
    Neuron indicator;
    uint32_t l2_base = static_cast<uint32_t>(net.layers[1].neurons.size()) - 4 * d;
    for (uint32_t t = 0; t < 2 * d; ++t) {
      indicator.indices.push_back(l2_base + 2 * t + 1);
      indicator.weights.push_back(fold[t].w_psi1);
      indicator.indices.push_back(l2_base + 2 * t + 2);
      indicator.weights.push_back(fold[t].w_psi2);
    }
    int64_t bias = f.kind == Kind::Fp ? -(static_cast<int64_t>(d) - 1)
                                      : zero_coords - (static_cast<int64_t>(d) - 1);
    indicator.indices.push_back(0);  // patched below once the l2 width is known
    indicator.weights.push_back(detail::int_float(f, bias));
    net.layers[2].neurons.push_back(std::move(indicator));
  }
  // Patch bias indices now that layer-2 width is final; fix layer-2 bias
  // column references as well.
  uint32_t l1_width = static_cast<uint32_t>(net.layers[0].neurons.size());
  uint32_t l2_width = static_cast<uint32_t>(net.layers[1].neurons.size());
  for (Neuron& nr : net.layers[1].neurons) nr.indices[1] = l1_width + 1;
  for (Neuron& nr : net.layers[2].neurons) nr.indices.back() = l2_width + 1;
  Neuron out;
  for (uint32_t i = 0; i < n; ++i) {
    out.indices.push_back(i + 1);
    out.weights.push_back(ys[i]);
  }
  net.layers[3].neurons.push_back(std::move(out));
  return net;
}

// ReLU approximator: 4 layers, at most (20d+2)K^d parameters.
inline Network relu_approximator(const GridPlan& plan) {
  const Format& f = plan.format;
  const uint32_t d = plan.d;
  const uint64_t C = plan.cells.size();
  const uint64_t total = plan.multi_cell_count();
  Network net;
  net.format = f;
  net.activation = Activation::ReLU;
  net.input_dim = d;
  net.layers.resize(4);

  Float eta_f, fp_low;
  if (f.kind == Kind::Fpq) {
    eta_f = detail::float_exact(f, f.eta());
    // All thresholds lie in (0, succ(1)]; the gadget needs them within kappa.
    if (Dyadic::compare(f.kappa(), Dyadic::from_int(1)) < 0)
      throw ThresholdOutOfRange("kappa < 1: grid thresholds exceed the gadget range");
  } else {
    fp_low = detail::int_float(f, -1);  // any negative threshold: 1{x >= -1} = 1 on [0,1]
  }

  std::vector<uint32_t> iota(d, 0);
  for (uint64_t flat = 0; flat < total; ++flat) {
    std::vector<detail::GadgetBlockWeights> fold;
    fold.reserve(2 * d);
    int64_t first_cells = 0;
    for (uint32_t j = 0; j < d; ++j) {
      const AxisCell& cell = plan.cells[iota[j]];
      if (iota[j] == 0) {
        if (f.kind == Kind::Fpq) {
          ++first_cells;
          fold.push_back(detail::append_gadget_pair(
              net, j + 1, compute_gadget_params(f, neg(eta_f), Direction::LE), -1));
        } else {
          fold.push_back(detail::append_gadget_pair(
              net, j + 1, compute_gadget_params(f, fp_low, Direction::GE), +1));
        }
      } else {
        fold.push_back(detail::append_gadget_pair(
            net, j + 1, compute_gadget_params(f, cell.lo, Direction::GE), +1));
      }
      fold.push_back(detail::append_gadget_pair(
          net, j + 1, compute_gadget_params(f, cell.upper, Direction::GE), -1));
    }
    Neuron indicator;
    uint32_t l2_base = static_cast<uint32_t>(net.layers[1].neurons.size()) - 4 * d;
    for (uint32_t t = 0; t < 2 * d; ++t) {
      indicator.indices.push_back(l2_base + 2 * t + 1);
      indicator.weights.push_back(fold[t].w_psi1);
      indicator.indices.push_back(l2_base + 2 * t + 2);
      indicator.weights.push_back(fold[t].w_psi2);
    }
    int64_t bias = f.kind == Kind::Fp ? -(static_cast<int64_t>(d) - 1)
                                      : first_cells - (static_cast<int64_t>(d) - 1);
    indicator.indices.push_back(0);
    indicator.weights.push_back(detail::int_float(f, bias));
    net.layers[2].neurons.push_back(std::move(indicator));
    uint32_t j = d;
    while (j > 0) {
      --j;
      if (++iota[j] < C) break;
      iota[j] = 0;
    }
  }
  uint32_t l1_width = static_cast<uint32_t>(net.layers[0].neurons.size());
  uint32_t l2_width = static_cast<uint32_t>(net.layers[1].neurons.size());
  for (Neuron& nr : net.layers[1].neurons) nr.indices[1] = l1_width + 1;
  for (Neuron& nr : net.layers[2].neurons) nr.indices.back() = l2_width + 1;
  Neuron out;
  for (uint64_t i = 0; i < total; ++i) {
    out.indices.push_back(static_cast<uint32_t>(i) + 1);
    out.weights.push_back(plan.values[i]);
  }
  net.layers[3].neurons.push_back(std::move(out));
  return net;
}

// The gadget-free two-ReLU indicator for 1{x >= 1}: exact under real
// arithmetic, oscillating under floating point. Kept as a negative control.
inline Network naive_relu_indicator(const Format& f) {
  Network net;
  net.format = f;
  net.activation = Activation::ReLU;
  net.input_dim = 1;
  net.layers.resize(2);
  Float pow_p = detail::pow2_float(f, f.p);
  Float minus_pow_p = neg(pow_p);
  Float minus_one_minus_u = detail::float_exact(
      f, Dyadic::from_int(-((int64_t(1) << f.p) - 1)));  // -(1-u) * 2^p
  net.layers[0].neurons.push_back(Neuron{{1, 2}, {pow_p, minus_one_minus_u}});
  net.layers[0].neurons.push_back(Neuron{{1, 2}, {pow_p, minus_pow_p}});
  net.layers[1].neurons.push_back(Neuron{{1, 2}, {one(f), detail::int_float(f, -1)}});
  return net;
}

}  // namespace floatnet
