#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "floatnet/bits.hpp"
#include "floatnet/constructors.hpp"
#include "floatnet/enumerate.hpp"
#include "floatnet/lemmas.hpp"
#include "floatnet/network.hpp"

namespace floatnet {

// Machine-readable verification outcome. Serialized content is deterministic
// for a given (format, domain, seed); wall time is reported separately.
struct Report {
  std::string suite;
  std::string format;
  std::string domain;
  uint64_t checked = 0;
  uint64_t passed = 0;
  std::vector<nlohmann::json> counterexamples;
  std::vector<std::string> notes;
  double wall_ms = 0.0;

  static constexpr size_t kMaxCounterexamples = 10;

  bool ok() const { return checked == passed && checked > 0; }

  template <class WitnessFn>
  void record(bool pass, WitnessFn&& witness) {
    ++checked;
    if (pass) {
      ++passed;
    } else if (counterexamples.size() < kMaxCounterexamples) {
      counterexamples.push_back(witness());
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = "floatnet.report/v1";
    j["suite"] = suite;
    j["format"] = format;
    j["domain"] = domain;
    j["checked"] = checked;
    j["passed"] = passed;
    j["counterexamples"] = counterexamples;
    j["notes"] = notes;
    return j;
  }
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline nlohmann::json float_json(const Format& f, const Float& v) {
  return format_text(f, v);
}

}  // namespace detail

// Deterministic generator (splitmix64) for the randomized suites.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
};

// ---- Lemma suites ------------------------------------------------------------

enum class LemmaId { Sterbenz, Exact, IntegerExact, Ignore, Representable };

inline std::string lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::Sterbenz: return "sterbenz";
    case LemmaId::Exact: return "exact";
    case LemmaId::IntegerExact: return "integer-exact";
    case LemmaId::Ignore: return "ignore";
    case LemmaId::Representable: return "representable";
  }
  return "?";
}

inline LemmaId lemma_from_name(const std::string& s) {
  if (s == "sterbenz") return LemmaId::Sterbenz;
  if (s == "exact") return LemmaId::Exact;
  if (s == "integer-exact") return LemmaId::IntegerExact;
  if (s == "ignore") return LemmaId::Ignore;
  if (s == "representable") return LemmaId::Representable;
  throw ConfigError("unknown lemma '" + s + "'");
}

namespace detail {

// Value domain for the pairwise lemma sweeps: every finite value for Fpq,
// the exponent window for Fp (zero included once).
inline std::vector<Float> lemma_domain(const Format& f, const ExpWindow* window) {
  if (f.kind == Kind::Fpq) return enumerate_all(f);
  if (!window) throw UnboundedEnumeration("Fp lemma sweeps require an exponent window");
  uint64_t m_hi = (uint64_t(2) << f.p) - 1;
  Float big = make_finite(1, m_hi, window->hi);
  return enumerate_floats(f, neg(big), big, *window);
}

inline Report representable_suite(const Format& f, const ExpWindow* window) {
  Report rep;
  rep.suite = "lemmas.representable";
  rep.format = f.spec_string();
  std::vector<Float> values = lemma_domain(f, window);
  rep.domain = "canonical values, successor midpoints, and n*2^m hypothesis grid (" +
               std::to_string(values.size()) + " values)";
  // Every canonical value is representable; every midpoint between
  // consecutive values is not.
  for (size_t i = 0; i < values.size(); ++i) {
    const Float& v = values[i];
    bool okv = is_representable(f, to_dyadic(f, v));
    rep.record(okv, [&] {
      return nlohmann::json{{"kind", "canonical"}, {"x", detail::float_json(f, v)}};
    });
    if (i + 1 < values.size()) {
      // Under Fp the windowed list is not consecutive around zero (floats of
      // smaller exponent exist outside the window); skip those pairs.
      if (f.kind == Kind::Fp && (v.is_zero() || values[i + 1].is_zero())) continue;
      Dyadic mid = Dyadic::add(to_dyadic(f, v), to_dyadic(f, values[i + 1]));
      mid.exp2 -= 1;
      if (Dyadic::compare(mid, to_dyadic(f, v)) == 0) continue;  // equal values (double zero)
      bool okm = !is_representable(f, mid);
      // The midpoint must also round to one of its two neighbours.
      Float r = round_dyadic(f, mid);
      bool okr = r.is_finite() &&
                 (same_value(r, v) || same_value(r, values[i + 1]));
      rep.record(okm && okr, [&] {
        return nlohmann::json{{"kind", "midpoint"},
                              {"between", detail::float_json(f, v)},
                              {"and", detail::float_json(f, values[i + 1])}};
      });
    }
  }
  // Lemma hypothesis grid: n * 2^m with 0 < n < 2^{1+p-c} is representable.
  int64_t m_lo, m_hi;
  if (f.kind == Kind::Fpq) {
    m_lo = -f.p + f.e_min;
    m_hi = -f.p + f.e_max;
  } else {
    m_lo = window->lo - f.p;
    m_hi = window->hi - f.p;
  }
  for (int64_t m = m_lo; m <= m_hi; ++m) {
    // The lemma hypothesis bound n < 2^{1+p-c} uses c = max{0, e_min - m}.
    int64_t c = f.kind == Kind::Fpq ? std::max<int64_t>(0, f.e_min - m) : 0;
    if (c > f.p + 1) continue;
    uint64_t n_hi = (uint64_t(2) << f.p) >> c;
    for (uint64_t n = 1; n < n_hi; ++n) {
      Dyadic x(1, BigUint(n), m);
      bool okh = is_representable(f, x);
      Float r = round_dyadic(f, x);
      bool okr = r.is_finite() && Dyadic::compare(to_dyadic(f, r), x) == 0;
      rep.record(okh && okr, [&] {
        return nlohmann::json{{"kind", "hypothesis"},
                              {"n", n},
                              {"m", m},
                              {"representable", okh},
                              {"round_trip", okr}};
      });
    }
  }
  return rep;
}

}  // namespace detail

inline Report run_lemma_suite(const Format& f, LemmaId id, const ExpWindow* window = nullptr) {
  detail::Stopwatch sw;
  if (id == LemmaId::Representable) {
    Report rep = detail::representable_suite(f, window);
    rep.wall_ms = sw.ms();
    return rep;
  }
  Report rep;
  rep.suite = "lemmas." + lemma_name(id);
  rep.format = f.spec_string();
  std::vector<Float> values = detail::lemma_domain(f, window);
  rep.domain = "all ordered pairs over " + std::to_string(values.size()) +
               " finite values, filtered by the lemma hypothesis";
  for (const Float& x : values) {
    for (const Float& y : values) {
      LemmaVerdict v;
      switch (id) {
        case LemmaId::Sterbenz: v = check_sterbenz(f, x, y); break;
        case LemmaId::Exact: v = check_exact_lemma(f, x, y); break;
        case LemmaId::IntegerExact: v = check_integer_exact(f, x, y); break;
        case LemmaId::Ignore: v = check_ignore(f, x, y); break;
        case LemmaId::Representable: break;
      }
      if (!v.hypothesis_matched) continue;
      rep.record(v.holds, [&] {
        return nlohmann::json{{"x", detail::float_json(f, x)},
                              {"y", detail::float_json(f, y)},
                              {"detail", v.witness ? v.witness->detail : ""}};
      });
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---- Oscillation golden table -----------------------------------------------

// Closed-form output of the naive two-ReLU indicator of 1{x >= 1} under Fp.
// Branches: 0 below 1, 1 on [1, 1.1 x 2^1), the parity value 1 + (-1)^{n_x+1}
// on [1.1 x 2^1, 1.01 x 2^2), 0 from 1.01 x 2^2 on -- except for two boundary
// families where the otherwise-natural derivation (pred(1) = 1-u, and x-1
// representable above 4) breaks down; both confirmed against IEEE binary32
// hardware:
//   * x = pred(1) = 1 - u/2: the scaled subtraction is exact, f = 1/2;
//   * x in [2^{p+1}, 2^{p+2}) with odd significand: (x x 2^p) (-) 2^p lands on
//     a tie and rounds down one coarse ulp, f = 2^{p+1}.
struct OscillationExpectation {
  Dyadic value;
  bool corrected;  // true on the two families above
};

inline OscillationExpectation oscillation_expected(int p, const Format& f, const Float& x) {
  Dyadic dx = to_dyadic(f, x);
  const Dyadic one_d = Dyadic::from_int(1);
  const Dyadic three = Dyadic::from_int(3);
  const Dyadic five = Dyadic::from_int(5);
  OscillationExpectation e{Dyadic(), false};
  if (Dyadic::compare(dx, one_d) < 0) {
    if (same_value(x, make_finite(1, (uint64_t(2) << p) - 1, -1))) {
      e.value = Dyadic(1, BigUint(1), -1);  // f(pred(1)) = 1/2
      e.corrected = true;
    }
    return e;
  }
  if (Dyadic::compare(dx, three) < 0) {
    e.value = one_d;
    return e;
  }
  if (Dyadic::compare(dx, five) < 0) {
    // n_x = (x - 1.1_2 x 2^1) * 2^{p-1}, a natural number on this branch.
    Dyadic nx = Dyadic::sub(dx, three);
    nx.exp2 += p - 1;
    if (nx.sign < 0 || (nx.sign != 0 && nx.exp2 < 0))
      throw DomainError("internal: n_x is not a natural number");
    bool odd = nx.sign != 0 && nx.exp2 == 0;  // odd magnitude at scale 0
    if (odd) e.value = Dyadic::from_int(2);
    return e;
  }
  if (x.exp == p + 1 && (x.sig & 1) != 0) {
    e.value = Dyadic::scaled_pow2(1, p + 1);
    e.corrected = true;
  }
  return e;
}

// Checks the naive two-ReLU net against the closed form on an exhaustive
// window covering all four branches (the default window does for p >= 2).
inline Report reproduce_oscillation(int p, const ExpWindow& window = ExpWindow{-8, 8}) {
  if (p < 2) throw DomainError("oscillation table needs p >= 2");
  detail::Stopwatch sw;
  Format f = make_format(Kind::Fp, p);
  Report rep;
  rep.suite = "oscillation";
  rep.format = f.spec_string();
  rep.domain = "exponent window [" + std::to_string(window.lo) + ", " +
               std::to_string(window.hi) + "]";
  Network net = naive_relu_indicator(f);
  uint64_t m_hi = (uint64_t(2) << f.p) - 1;
  Float big = make_finite(1, m_hi, window.hi);
  std::vector<Float> xs = enumerate_floats(f, neg(big), big, window);
  uint64_t corrected_points = 0;
  for (const Float& x : xs) {
    OscillationExpectation e = oscillation_expected(p, f, x);
    if (e.corrected) ++corrected_points;
    Float out = eval(net, {x}).output;
    Float want = round_dyadic(f, e.value);  // exact: expectations are representable
    rep.record(same_value(out, want), [&] {
      return nlohmann::json{{"x", detail::float_json(f, x)},
                            {"expected", e.value.to_string()},
                            {"got", detail::float_json(f, out)}};
    });
  }
  rep.notes.push_back(
      "closed form corrected at x = pred(1) (f = 1/2) and at odd-significand x in "
      "[2^{p+1}, 2^{p+2}) (f = 2^{p+1}); both families verified against IEEE binary32 "
      "hardware; " +
      std::to_string(corrected_points) + " such points in this window");
  rep.wall_ms = sw.ms();
  return rep;
}

// ---- Gadget verification ------------------------------------------------------

namespace detail {

inline bool is_gadget_range_value(const Format& f, const Float& v, bool nonneg) {
  // {0} U [2^p] for the first half, the negation for the second.
  if (!v.is_finite()) return false;
  if (v.sig == 0) return true;
  if (nonneg && v.sign < 0) return false;
  if (!nonneg && v.sign > 0) return false;
  int64_t k = v.exp - f.p;
  int64_t tz = __builtin_ctzll(v.sig);
  if (k + tz < 0) return false;  // not an integer
  int64_t bits = (64 - __builtin_clzll(v.sig)) + k;
  if (bits > f.p + 1) return false;
  uint64_t n = k >= 0 ? (v.sig << k) : (v.sig >> -k);
  return n >= 1 && n <= (uint64_t(1) << f.p);
}

inline bool trace_all_representable(const Format& f, const EvalTrace& trace) {
  for (const auto& layer : trace.layers) {
    for (const NeuronTrace& nt : layer) {
      if (!nt.pre.is_finite() || !nt.post.is_finite()) return false;
      if (!is_representable(f, to_dyadic(f, nt.pre))) return false;
      if (!is_representable(f, to_dyadic(f, nt.post))) return false;
    }
  }
  return true;
}

}  // namespace detail

// For each threshold z, builds the GE and LE gadget pairs and checks the
// indicator identity, the output-range membership, and the representability
// of every intermediate over the x domain.
inline Report verify_gadgets(const Format& f, const std::vector<Float>& zs,
                             const std::vector<Float>& xs) {
  detail::Stopwatch sw;
  Report rep;
  rep.suite = "gadgets";
  rep.format = f.spec_string();
  rep.domain = std::to_string(zs.size()) + " thresholds x " + std::to_string(xs.size()) +
               " inputs x {GE, LE}";
  Float one_f = one(f);
  for (const Float& z : zs) {
    for (Direction dir : {Direction::GE, Direction::LE}) {
      auto halves = relu_threshold_gadget(f, z, dir);
      for (const Float& x : xs) {
        EvalTrace t1, t2;
        Float o1 = eval_traced(halves.first, {x}, t1).output;
        Float o2 = eval_traced(halves.second, {x}, t2).output;
        Float sum = add(f, o1, o2);
        bool want =
            dir == Direction::GE ? compare_finite(x, z) >= 0 : compare_finite(x, z) <= 0;
        bool value_ok = want ? same_value(sum, one_f) : sum.is_zero();
        bool range_ok = detail::is_gadget_range_value(f, o1, true) &&
                        detail::is_gadget_range_value(f, o2, false);
        bool rep_ok = detail::trace_all_representable(f, t1) &&
                      detail::trace_all_representable(f, t2);
        rep.record(value_ok && range_ok && rep_ok, [&] {
          return nlohmann::json{{"z", detail::float_json(f, z)},
                                {"direction", dir == Direction::GE ? "ge" : "le"},
                                {"x", detail::float_json(f, x)},
                                {"psi1", detail::float_json(f, o1)},
                                {"psi2", detail::float_json(f, o2)},
                                {"sum", detail::float_json(f, sum)},
                                {"value_ok", value_ok},
                                {"range_ok", range_ok},
                                {"representable_ok", rep_ok}};
        });
      }
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// Exhaustive Fpq gadget domains: all 0 < |z| <= kappa and |x| <= (2-u)*2^{-2+e0}.
inline std::pair<std::vector<Float>, std::vector<Float>> fpq_gadget_domains(const Format& f) {
  if (f.kind != Kind::Fpq) throw FormatMismatch("exhaustive gadget domains need Fpq");
  Float kappa_f = detail::float_exact(f, f.kappa());
  Float xmax = detail::float_exact(f, Dyadic::scaled_pow2((int64_t(1) << (f.p + 1)) - 1,
                                                          -2 + f.e0() - f.p));
  std::vector<Float> zs;
  for (const Float& v : enumerate_floats(f, neg(kappa_f), kappa_f)) {
    if (v.sig != 0) zs.push_back(v);
  }
  std::vector<Float> xs = enumerate_floats(f, neg(xmax), xmax);
  return {zs, xs};
}

// Windowed Fp gadget x-domain: the exponent window plus successor/predecessor
// chains around each case boundary of the gadget derivation for the threshold.
inline std::vector<Float> fp_gadget_x_domain(const Format& f, const Float& z,
                                             const ExpWindow& window) {
  uint64_t m_hi = (uint64_t(2) << f.p) - 1;
  Float big = make_finite(1, m_hi, window.hi);
  std::vector<Float> xs = enumerate_floats(f, neg(big), big, window);
  NormalizedView nv = normalized_view(f, abs_value(z));
  std::vector<Dyadic> anchors;
  const Dyadic two = Dyadic::from_int(2);
  const Dyadic u = f.unit_roundoff();
  Dyadic two_minus_u = Dyadic::sub(two, u);
  Dyadic two_minus_2u = Dyadic::sub(two, Dyadic::add(u, u));
  auto scaled = [&](const Dyadic& d, int64_t e) {
    Dyadic r = d;
    r.exp2 += e;
    return r;
  };
  anchors.push_back(scaled(two_minus_u, nv.exp - 1));
  anchors.push_back(scaled(two_minus_2u, nv.exp - 1));
  anchors.push_back(scaled(two_minus_u, nv.exp));
  anchors.push_back(scaled(two_minus_2u, nv.exp));
  anchors.push_back(Dyadic::scaled_pow2(1, nv.exp));
  anchors.push_back(Dyadic::scaled_pow2(1, nv.exp + 1));
  anchors.push_back(to_dyadic(f, abs_value(z)));
  for (const Dyadic& a : anchors) {
    for (int s : {1, -1}) {
      Dyadic v = a;
      v.sign *= s;
      Float fv = round_dyadic(f, v);
      Float lo = fv, hi = fv;
      for (int i = 0; i < 3; ++i) {
        if (auto pp = pred(f, lo)) lo = *pp;
        if (auto ss = succ(f, hi)) hi = *ss;
        xs.push_back(lo);
        xs.push_back(hi);
      }
      xs.push_back(fv);
    }
  }
  std::sort(xs.begin(), xs.end(), [](const Float& a, const Float& b) {
    int c = compare_finite(a, b);
    return c < 0;
  });
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const Float& a, const Float& b) { return same_value(a, b); }),
           xs.end());
  return xs;
}

// ---- Network-level verification ----------------------------------------------

inline Report verify_memorization(const Network& net, const std::vector<std::vector<Float>>& zs,
                                  const std::vector<Float>& ys) {
  detail::Stopwatch sw;
  Report rep;
  rep.suite = "memorize";
  rep.format = net.format.spec_string();
  rep.domain = std::to_string(zs.size()) + " dataset points";
  for (size_t i = 0; i < zs.size(); ++i) {
    EvalResult r = eval(net, zs[i]);
    bool value_ok = same_value(r.output, ys[i]);
    bool nan_ok = !r.flags.nan_seen;
    bool overflow_ok = net.format.kind == Kind::Fpq || !r.flags.overflow_seen;
    rep.record(value_ok && nan_ok && overflow_ok, [&] {
      nlohmann::json jz = nlohmann::json::array();
      for (const Float& v : zs[i]) jz.push_back(detail::float_json(net.format, v));
      return nlohmann::json{{"z", jz},
                            {"want", detail::float_json(net.format, ys[i])},
                            {"got", detail::float_json(net.format, r.output)},
                            {"nan_seen", r.flags.nan_seen},
                            {"overflow_seen", r.flags.overflow_seen}};
    });
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// Per-point approximation bound |f(x) - f*(x)| <= intrinsic + epsilon with all
// comparisons in exact rational arithmetic. Under Fp the intrinsic term uses
// the cell representative (lower corner), the correspondingly weakened bound.
inline Report verify_bound(const Network& net, const GridPlan& plan, const Rational& epsilon,
                           const std::vector<Float>& axis_values) {
  detail::Stopwatch sw;
  const Format& f = net.format;
  Report rep;
  rep.suite = "approx.bound";
  rep.format = f.spec_string();
  rep.domain = std::to_string(axis_values.size()) + "^" + std::to_string(plan.d) +
               " grid points in [0,1]^d";
  if (plan.fp_lower_corner)
    rep.notes.push_back("Fp bound uses the lower-corner representative gamma");
  const uint32_t d = plan.d;
  std::vector<size_t> pos(d, 0);
  std::vector<Float> x(d);
  std::vector<Rational> xr(d);
  bool done = axis_values.empty();
  while (!done) {
    for (uint32_t j = 0; j < d; ++j) {
      x[j] = axis_values[pos[j]];
      xr[j] = to_rational(f, x[j]);
    }
    Rational fstar = plan.target(xr);
    EvalResult r = eval(net, x);
    bool ok = r.output.is_finite() && !r.flags.nan_seen;
    Rational intrinsic;
    if (ok) {
      if (plan.fp_lower_corner) {
        std::vector<Rational> gr(d);
        std::vector<uint32_t> iota(d);
        for (uint32_t j = 0; j < d; ++j) iota[j] = plan.axis_cell_of(x[j]);
        const std::vector<Float>& gamma = plan.gammas[plan.flat_index(iota)];
        for (uint32_t j = 0; j < d; ++j) gr[j] = to_rational(f, gamma[j]);
        Rational fg = plan.target(gr);
        intrinsic = Rational::sub(fg, to_rational(f, round_rational(f, fg))).abs();
      } else {
        intrinsic = Rational::sub(fstar, to_rational(f, round_rational(f, fstar))).abs();
      }
      Rational lhs = Rational::sub(to_rational(f, r.output), fstar).abs();
      Rational rhs = Rational::add(intrinsic, epsilon);
      ok = Rational::compare(lhs, rhs) <= 0;
    }
    rep.record(ok, [&] {
      nlohmann::json jx = nlohmann::json::array();
      for (const Float& v : x) jx.push_back(detail::float_json(f, v));
      return nlohmann::json{{"x", jx},
                            {"f", detail::float_json(f, r.output)},
                            {"fstar", fstar.to_string()},
                            {"epsilon", epsilon.to_string()}};
    });
    done = true;
    for (uint32_t j = d; j-- > 0;) {
      if (++pos[j] < axis_values.size()) {
        done = false;
        break;
      }
      pos[j] = 0;
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// epsilon = 0 exactness: f(x) = [[f*(x)]] at every grid point.
inline Report verify_pointwise_rounding(const Network& net, const GridPlan& plan,
                                        const std::vector<Float>& axis_values) {
  detail::Stopwatch sw;
  const Format& f = net.format;
  Report rep;
  rep.suite = "approx.exact";
  rep.format = f.spec_string();
  rep.domain = std::to_string(axis_values.size()) + "^" + std::to_string(plan.d) +
               " grid points in [0,1]^d";
  const uint32_t d = plan.d;
  std::vector<size_t> pos(d, 0);
  std::vector<Float> x(d);
  std::vector<Rational> xr(d);
  bool done = axis_values.empty();
  while (!done) {
    for (uint32_t j = 0; j < d; ++j) {
      x[j] = axis_values[pos[j]];
      xr[j] = to_rational(f, x[j]);
    }
    Float want = round_rational(f, plan.target(xr));
    EvalResult r = eval(net, x);
    rep.record(same_value(r.output, want), [&] {
      nlohmann::json jx = nlohmann::json::array();
      for (const Float& v : x) jx.push_back(detail::float_json(f, v));
      return nlohmann::json{{"x", jx},
                            {"want", detail::float_json(f, want)},
                            {"got", detail::float_json(f, r.output)}};
    });
    done = true;
    for (uint32_t j = d; j-- > 0;) {
      if (++pos[j] < axis_values.size()) {
        done = false;
        break;
      }
      pos[j] = 0;
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// Scans a lattice over the axis values (full product if it fits the budget,
// an evenly strided sublattice otherwise) and requires clear overflow and NaN
// flags everywhere.
inline Report overflow_scan(const Network& net, const std::vector<Float>& axis_values,
                            uint64_t max_points = 10000) {
  detail::Stopwatch sw;
  const Format& f = net.format;
  const uint32_t d = net.input_dim;
  Report rep;
  rep.suite = "overflow-scan";
  rep.format = f.spec_string();
  // Per-axis stride so that the lattice stays within the budget.
  uint64_t per_axis = axis_values.size();
  uint64_t total = 1;
  bool clipped = false;
  for (uint32_t j = 0; j < d; ++j) {
    if (total > max_points / std::max<uint64_t>(per_axis, 1)) {
      clipped = true;
      break;
    }
    total *= per_axis;
  }
  std::vector<Float> axis;
  if (!clipped) {
    axis = axis_values;
  } else {
    uint64_t s = std::max<uint64_t>(2, static_cast<uint64_t>(
                                           std::pow(static_cast<double>(max_points),
                                                    1.0 / static_cast<double>(d))));
    s = std::min<uint64_t>(s, per_axis);
    for (uint64_t i = 0; i < s; ++i) {
      size_t idx = static_cast<size_t>(i * (per_axis - 1) / (s - 1));
      axis.push_back(axis_values[idx]);
    }
    axis.erase(std::unique(axis.begin(), axis.end(),
                           [](const Float& a, const Float& b) { return same_value(a, b); }),
               axis.end());
  }
  rep.domain = std::to_string(axis.size()) + "^" + std::to_string(d) + " lattice points";
  std::vector<size_t> pos(d, 0);
  std::vector<Float> x(d);
  bool done = axis.empty();
  while (!done) {
    for (uint32_t j = 0; j < d; ++j) x[j] = axis[pos[j]];
    EvalResult r = eval(net, x);
    rep.record(!r.flags.overflow_seen && !r.flags.nan_seen, [&] {
      nlohmann::json jx = nlohmann::json::array();
      for (const Float& v : x) jx.push_back(detail::float_json(f, v));
      return nlohmann::json{{"x", jx},
                            {"overflow_seen", r.flags.overflow_seen},
                            {"nan_seen", r.flags.nan_seen}};
    });
    done = true;
    for (uint32_t j = d; j-- > 0;) {
      if (++pos[j] < axis.size()) {
        done = false;
        break;
      }
      pos[j] = 0;
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// The Fpq ReLU no-overflow axis: all values with |x| <= (2-u) * 2^{-3+2^{q-2}}.
inline std::vector<Float> no_overflow_axis(const Format& f) {
  if (f.kind != Kind::Fpq) throw FormatMismatch("no-overflow domain is an Fpq notion");
  Float bound = detail::float_exact(
      f, Dyadic::scaled_pow2((int64_t(1) << (f.p + 1)) - 1,
                             -3 + (int64_t(1) << (f.q - 2)) - f.p));
  return enumerate_floats(f, neg(bound), bound);
}

// ---- Hardware conformance ------------------------------------------------------

// Differential test of (+), (-), (x) in Fpq(23,8) against the host's IEEE
// binary32 arithmetic, comparing full bit patterns with NaNs identified.
inline Report hardware_conformance(uint64_t random_pairs, uint64_t seed) {
  static_assert(std::numeric_limits<float>::is_iec559, "host float must be IEEE binary32");
  detail::Stopwatch sw;
  Format f = make_format(Kind::Fpq, 23, 8);
  Report rep;
  rep.suite = "hardware-conformance";
  rep.format = f.spec_string();
  rep.domain = std::to_string(random_pairs) + " random operand pairs + adversarial set";
  const std::vector<uint32_t> adversarial = {
      0x00000000u, 0x80000000u,              // +-0
      0x00000001u, 0x80000001u,              // smallest subnormals
      0x007FFFFFu, 0x807FFFFFu,              // largest subnormals
      0x00800000u, 0x80800000u,              // smallest normals
      0x3F800000u, 0xBF800000u,              // +-1
      0x3F800001u, 0x34000000u, 0x33FFFFFFu, // 1+ulp, 2^-23 neighbourhood
      0x7F7FFFFFu, 0xFF7FFFFFu,              // +-Omega
      0x7F000000u, 0xFF000000u,              // +-2^127
      0x73800000u, 0x73000000u,              // 2^104, 2^103 (Omega' straddle)
      0x7F800000u, 0xFF800000u,              // +-inf
      0x7FC00000u, 0x7F800001u, 0xFFC00001u, // NaNs
      0x00000002u, 0x40490FDBu, 0xC0490FDBu, // pi-ish
      0x7F7FFFFEu, 0x3FFFFFFFu, 0x00400000u,
  };
  auto to_float = [](uint32_t bits) {
    float v;
    static_assert(sizeof v == sizeof bits);
    __builtin_memcpy(&v, &bits, sizeof v);
    return v;
  };
  auto to_bits = [](float v) {
    uint32_t bits;
    __builtin_memcpy(&bits, &v, sizeof v);
    return bits;
  };
  auto canon_nan = [&](uint32_t bits) {
    bool is_nan = (bits & 0x7F800000u) == 0x7F800000u && (bits & 0x007FFFFFu) != 0;
    return is_nan ? 0x7FC00000u : bits;
  };
  auto check_pair = [&](uint32_t ab, uint32_t bb) {
    Float a = decode_bits(f, ab), b = decode_bits(f, bb);
    float fa = to_float(ab), fb = to_float(bb);
    struct Case {
      const char* op;
      Float ours;
      float hw;
    } cases[3] = {
        {"add", add(f, a, b), fa + fb},
        {"sub", sub(f, a, b), fa - fb},
        {"mul", mul(f, a, b), fa * fb},
    };
    for (const auto& c : cases) {
      uint32_t ours = canon_nan(static_cast<uint32_t>(encode_bits(f, c.ours)));
      uint32_t hw = canon_nan(to_bits(c.hw));
      rep.record(ours == hw, [&] {
        return nlohmann::json{{"op", c.op},
                              {"a", bits_to_hex(f, ab)},
                              {"b", bits_to_hex(f, bb)},
                              {"ours", bits_to_hex(f, ours)},
                              {"hardware", bits_to_hex(f, hw)}};
      });
    }
  };
  for (uint32_t a : adversarial)
    for (uint32_t b : adversarial) check_pair(a, b);
  Rng rng(seed);
  for (uint64_t i = 0; i < random_pairs; ++i) {
    check_pair(static_cast<uint32_t>(rng.next()), static_cast<uint32_t>(rng.next()));
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---- Catastrophic cancellation identity -----------------------------------------

// (1/delta) (x) ((1 (+) delta) (-) 1) with delta = 2^{-(p+2)} evaluates to 0
// while the exact value is 1: relative error one.
inline Report catastrophic_identity(const std::vector<int>& ps) {
  detail::Stopwatch sw;
  Report rep;
  rep.suite = "catastrophic-identity";
  rep.format = "fp:p in {...}";
  rep.domain = std::to_string(ps.size()) + " precisions";
  std::string fmts;
  for (int p : ps) {
    Format f = make_format(Kind::Fp, p);
    Float delta = detail::pow2_float(f, -(p + 2));
    Float inv_delta = detail::pow2_float(f, p + 2);
    Float r = mul(f, inv_delta, sub(f, add(f, one(f), delta), one(f)));
    // Exact value of (1/delta) * ((1 + delta) - 1) is 1; the float result must
    // be 0, i.e. relative error exactly one.
    bool ok = r.is_zero();
    rep.record(ok, [&] {
      return nlohmann::json{{"p", p}, {"got", detail::float_json(f, r)}};
    });
    fmts += (fmts.empty() ? "" : ",") + std::to_string(p);
  }
  rep.format = "fp:p in {" + fmts + "}";
  rep.wall_ms = sw.ms();
  return rep;
}

}  // namespace floatnet
