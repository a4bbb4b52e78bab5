// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run at full scale; budgeted runtimes are asserted where
// stated.
#include <cstdio>
#include <string>
#include <vector>

#include "floatnet/floatnet.hpp"

using namespace floatnet;

namespace {

int g_failures = 0;

void report_line(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %-24s %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::string counts(const Report& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu/%llu in %.1fs",
                static_cast<unsigned long long>(r.passed),
                static_cast<unsigned long long>(r.checked), r.wall_ms / 1000.0);
  return buf;
}

void dump_failures(const Report& r) {
  if (r.ok()) return;
  for (const auto& ce : r.counterexamples)
    std::printf("        counterexample: %s\n", ce.dump().c_str());
}

void criterion_hardware() {
  Report r = hardware_conformance(1000000, 42);
  bool pass = r.ok() && r.wall_ms < 120000.0;
  report_line(1, "hardware-conformance", pass, counts(r));
  dump_failures(r);
}

void criterion_lemmas() {
  detail::Stopwatch sw;
  bool pass = true;
  std::string detail_str;
  auto run = [&](const Format& f, const ExpWindow* w) {
    for (LemmaId id : {LemmaId::Sterbenz, LemmaId::Exact, LemmaId::IntegerExact, LemmaId::Ignore,
                       LemmaId::Representable}) {
      Report r = run_lemma_suite(f, id, w);
      pass &= r.ok();
      dump_failures(r);
    }
  };
  run(make_format(Kind::Fpq, 4, 5), nullptr);
  run(make_format(Kind::Fpq, 5, 5), nullptr);
  ExpWindow w{-20, 20};
  run(make_format(Kind::Fp, 4), &w);
  double secs = sw.ms() / 1000.0;
  pass &= secs < 300.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "3 formats x 5 lemmas in %.1fs", secs);
  report_line(2, "lemma-suites", pass, buf);
}

void criterion_oscillation() {
  bool pass = true;
  double total = 0;
  uint64_t checked = 0;
  for (int p : {4, 8, 12}) {
    // window covering all four branches including the corrected binade
    Report r = reproduce_oscillation(p, ExpWindow{-8, p + 3});
    pass &= r.ok();
    total += r.wall_ms;
    checked += r.checked;
    dump_failures(r);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "p in {4,8,12}, %llu points in %.1fs",
                static_cast<unsigned long long>(checked), total / 1000.0);
  report_line(3, "oscillation-table", pass, buf);
}

void criterion_gadgets() {
  Format f = make_format(Kind::Fpq, 4, 5);
  auto domains = fpq_gadget_domains(f);
  Report r = verify_gadgets(f, domains.first, domains.second);
  bool pass = r.ok() && r.wall_ms < 600000.0;
  report_line(4, "gadget-exhaustive", pass, counts(r));
  dump_failures(r);
}

void criterion_memorization() {
  bool pass = true;
  std::string detail_str;
  double total = 0;
  for (const Format& f : {make_format(Kind::Fp, 4), make_format(Kind::Fpq, 4, 5)}) {
    for (Activation act : {Activation::Step, Activation::ReLU}) {
      MemorizationConfig cfg;
      cfg.trials = 100;
      cfg.max_n = 20;
      cfg.max_d = 3;
      cfg.seed = 1234;
      cfg.run_overflow_scan = true;
      cfg.scan_budget = 10000;
      Report r = memorization_suite(f, act, cfg);
      pass &= r.ok();
      total += r.wall_ms;
      dump_failures(r);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "4 x 100 datasets in %.1fs", total / 1000.0);
  report_line(5, "memorization", pass, buf);
}

void criterion_approximation() {
  bool pass = true;
  double total = 0;
  std::vector<Rational> eps = {Rational(1, BigUint(1), BigUint(2)),
                               Rational(1, BigUint(1), BigUint(8))};
  for (Activation act : {Activation::Step, Activation::ReLU}) {
    Report r = approximation_suite(make_format(Kind::Fpq, 4, 5), act, eps);
    pass &= r.ok();
    total += r.wall_ms;
    dump_failures(r);
    ExpWindow w{-12, 0};
    Report rf = approximation_suite(make_format(Kind::Fp, 4), act, eps, &w);
    pass &= rf.ok();
    total += rf.wall_ms;
    dump_failures(rf);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "4 targets x {1/2,1/8} x {step,relu} x {fp,fpq} in %.1fs",
                total / 1000.0);
  report_line(6, "approximation-bound", pass, buf);
}

void criterion_epsilon_zero() {
  bool pass = true;
  double total = 0;
  for (Activation act : {Activation::Step, Activation::ReLU}) {
    Report r = epsilon_zero_suite(make_format(Kind::Fpq, 4, 5), act);
    pass &= r.ok();
    total += r.wall_ms;
    dump_failures(r);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "d=1 targets, both activations, in %.1fs", total / 1000.0);
  report_line(7, "epsilon-zero-exactness", pass, buf);
}

void criterion_catastrophic() {
  Report r = catastrophic_identity({4, 8, 12, 23});
  report_line(8, "catastrophic-identity", r.ok(), counts(r));
  dump_failures(r);
}

}  // namespace

int main() {
  detail::Stopwatch sw;
  criterion_hardware();
  criterion_lemmas();
  criterion_oscillation();
  criterion_gadgets();
  criterion_memorization();
  criterion_approximation();
  criterion_epsilon_zero();
  criterion_catastrophic();
  std::printf("%s: %d criterion(s) failing, total %.1fs\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures, sw.ms() / 1000.0);
  return g_failures == 0 ? 0 : 1;
}
