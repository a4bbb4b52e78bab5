// Command-line front end: construct networks from datasets or target
// functions, evaluate them, and run the verification suites.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floatnet/floatnet.hpp"

using nlohmann::json;
using namespace floatnet;

namespace {

ExpWindow parse_window(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("window must be LO:HI, e.g. -20:20");
  try {
    ExpWindow w;
    w.lo = std::stoll(s.substr(0, colon));
    w.hi = std::stoll(s.substr(colon + 1));
    if (w.lo > w.hi) throw ConfigError("window lower bound exceeds upper bound");
    return w;
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad window '" + s + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("bad window '" + s + "'");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  return doc;
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

// A numeric CLI value: exact decimal ("0.125") or fraction ("1/8").
Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational::from_decimal(s);
  Rational num = Rational::from_decimal(s.substr(0, slash));
  Rational den = Rational::from_decimal(s.substr(slash + 1));
  return Rational::div(num, den);
}

Float parse_input_value(const Format& f, const std::string& s) {
  try {
    return parse_text(f, s);
  } catch (const ParseError&) {
    // fall through to decimal form
  }
  Rational r = parse_rational(s);
  if (!is_representable(f, r))
    throw NotRepresentable("'" + s + "' is not a value of " + f.spec_string());
  return round_rational(f, r);
}

int emit_reports(const std::vector<Report>& reports, const std::string& out_path) {
  json arr = json::array();
  bool all_ok = true;
  for (const Report& r : reports) {
    arr.push_back(r.to_json());
    all_ok &= r.ok();
    std::fprintf(stderr, "%-28s %s  %llu/%llu  (%.1f ms)\n", r.suite.c_str(),
                 r.ok() ? "ok  " : "FAIL", static_cast<unsigned long long>(r.passed),
                 static_cast<unsigned long long>(r.checked), r.wall_ms);
  }
  if (!out_path.empty()) {
    write_json_file(out_path, arr);
  } else {
    std::cout << arr.dump(2) << "\n";
  }
  return all_ok ? 0 : 1;
}

struct VerifyOptions {
  std::string format_spec;
  std::vector<std::string> suites;
  std::string window;
  std::string out;
  uint64_t seed = 1;
  uint64_t trials = 0;  // 0 = suite default
};

int run_verify(const VerifyOptions& opt) {
  Format f = parse_format_spec(opt.format_spec);
  std::optional<ExpWindow> window;
  if (!opt.window.empty()) window = parse_window(opt.window);
  const ExpWindow* wptr = window ? &*window : nullptr;
  std::vector<Report> reports;
  for (const std::string& suite : opt.suites) {
    if (suite == "lemmas") {
      if (f.kind == Kind::Fp && !wptr)
        throw ConfigError("lemma sweeps under Fp require --window");
      for (LemmaId id : {LemmaId::Sterbenz, LemmaId::Exact, LemmaId::IntegerExact,
                         LemmaId::Ignore, LemmaId::Representable})
        reports.push_back(run_lemma_suite(f, id, wptr));
    } else if (suite == "oscillation") {
      if (f.kind != Kind::Fp) throw ConfigError("the oscillation table is an Fp suite");
      reports.push_back(window ? reproduce_oscillation(f.p, *window)
                               : reproduce_oscillation(f.p));
    } else if (suite == "gadgets") {
      if (f.kind == Kind::Fpq) {
        auto domains = fpq_gadget_domains(f);
        reports.push_back(verify_gadgets(f, domains.first, domains.second));
      } else {
        if (!wptr) throw ConfigError("gadget sweeps under Fp require --window");
        ExpWindow zw{std::max<int64_t>(wptr->lo / 2, wptr->lo), wptr->hi / 2};
        uint64_t m_hi = (uint64_t(2) << f.p) - 1;
        Float zbig = make_finite(1, m_hi, zw.hi);
        std::vector<Float> zs = enumerate_floats(f, neg(zbig), zbig, zw);
        std::vector<Float> keep;
        for (const Float& z : zs)
          if (z.sig != 0) keep.push_back(z);
        Report total;
        total.suite = "gadgets";
        total.format = f.spec_string();
        total.domain = std::to_string(keep.size()) + " thresholds, exponent window [" +
                       std::to_string(zw.lo) + ", " + std::to_string(zw.hi) +
                       "], x window + case-boundary chains";
        detail::Stopwatch sw;
        for (const Float& z : keep) {
          Report one = verify_gadgets(f, {z}, fp_gadget_x_domain(f, z, *wptr));
          total.checked += one.checked;
          total.passed += one.passed;
          for (auto& ce : one.counterexamples)
            if (total.counterexamples.size() < Report::kMaxCounterexamples)
              total.counterexamples.push_back(ce);
        }
        total.wall_ms = sw.ms();
        reports.push_back(std::move(total));
      }
    } else if (suite == "memorize") {
      MemorizationConfig cfg;
      cfg.trials = opt.trials ? static_cast<uint32_t>(opt.trials) : 20;
      cfg.seed = opt.seed;
      reports.push_back(memorization_suite(f, Activation::Step, cfg));
      reports.push_back(memorization_suite(f, Activation::ReLU, cfg));
    } else if (suite == "approx") {
      if (f.kind == Kind::Fp && !wptr)
        throw ConfigError("approximation sweeps under Fp require --window");
      std::vector<Rational> eps = {Rational(1, BigUint(1), BigUint(2)),
                                   Rational(1, BigUint(1), BigUint(8))};
      reports.push_back(approximation_suite(f, Activation::Step, eps, wptr));
      reports.push_back(approximation_suite(f, Activation::ReLU, eps, wptr));
      if (f.kind == Kind::Fpq) {
        reports.push_back(epsilon_zero_suite(f, Activation::Step));
        reports.push_back(epsilon_zero_suite(f, Activation::ReLU));
      }
    } else if (suite == "overflow") {
      if (f.kind != Kind::Fpq) throw ConfigError("the no-overflow scan is an Fpq suite");
      MemorizationConfig cfg;
      cfg.trials = opt.trials ? static_cast<uint32_t>(opt.trials) : 20;
      cfg.seed = opt.seed;
      cfg.run_overflow_scan = true;
      reports.push_back(memorization_suite(f, Activation::ReLU, cfg));
    } else if (suite == "hardware-conformance") {
      if (!(f.kind == Kind::Fpq && f.p == 23 && f.q == 8))
        throw ConfigError("hardware conformance requires --format fpq:p=23,q=8");
      reports.push_back(hardware_conformance(opt.trials ? opt.trials : 1000000, opt.seed));
    } else if (suite == "catastrophic") {
      reports.push_back(catastrophic_identity({4, 8, 12, 23}));
    } else {
      throw ConfigError("unknown suite '" + suite + "'");
    }
  }
  return emit_reports(reports, opt.out);
}

struct MemorizeOptions {
  std::string format_spec;
  std::string activation = "step";
  std::string dataset_path;
  std::string out;
};

int run_memorize(const MemorizeOptions& opt) {
  Format f = parse_format_spec(opt.format_spec);
  Activation act = activation_from_name(opt.activation);
  Dataset ds = dataset_from_json(read_json_file(opt.dataset_path));
  if (ds.format != f)
    throw FormatMismatch("dataset format " + ds.format.spec_string() +
                         " does not match --format " + f.spec_string());
  Network net = act == Activation::Step ? step_memorizer(f, ds.inputs, ds.outputs)
                                        : relu_memorizer(f, ds.inputs, ds.outputs);
  uint64_t n = ds.inputs.size(), d = ds.inputs[0].size();
  uint64_t params = count_params(net);
  if (act == Activation::Step) {
    std::printf("params %llu = 6dn+2n with n=%llu, d=%llu\n",
                static_cast<unsigned long long>(params), static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(d));
  } else {
    std::printf("params %llu = 20dn+2n with n=%llu, d=%llu (looser 20dn+5n bound: %llu)\n",
                static_cast<unsigned long long>(params), static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(d),
                static_cast<unsigned long long>(20 * d * n + 5 * n));
  }
  Report rep = verify_memorization(net, ds.inputs, ds.outputs);
  if (!opt.out.empty()) write_json_file(opt.out, serialize(net));
  std::fprintf(stderr, "memorization check: %llu/%llu\n",
               static_cast<unsigned long long>(rep.passed),
               static_cast<unsigned long long>(rep.checked));
  return rep.ok() ? 0 : 1;
}

struct ApproximateOptions {
  std::string format_spec;
  std::string activation = "step";
  std::string function;
  std::string epsilon, delta, lipschitz;
  uint32_t d = 1;
  std::string window;
  std::string out, report_path;
};

int run_approximate(const ApproximateOptions& opt) {
  Format f = parse_format_spec(opt.format_spec);
  Activation act = activation_from_name(opt.activation);
  ResolutionSpec rs;
  if (!opt.delta.empty()) {
    rs.delta = parse_rational(opt.delta);
  } else {
    if (opt.epsilon.empty() || opt.lipschitz.empty())
      throw ConfigError("give --delta, or both --epsilon and --lipschitz");
    rs.epsilon = parse_rational(opt.epsilon);
    rs.lipschitz = parse_rational(opt.lipschitz);
  }
  TargetFn target = target_from_expression(opt.function);
  GridPlan plan = build_grid_plan(f, opt.d, rs, target);
  Network net = act == Activation::Step ? step_approximator(plan) : relu_approximator(plan);
  uint64_t bound = (act == Activation::Step ? 6ull * opt.d + 2 : 20ull * opt.d + 2);
  for (uint32_t j = 0; j < opt.d; ++j) bound *= plan.nominal_cells;
  std::printf("cells %llu (nominal K = %llu), params %llu <= %llu\n",
              static_cast<unsigned long long>(plan.cell_count()),
              static_cast<unsigned long long>(plan.nominal_cells),
              static_cast<unsigned long long>(count_params(net)),
              static_cast<unsigned long long>(bound));
  std::vector<Float> axis;
  if (f.kind == Kind::Fpq) {
    axis = enumerate_floats(f, make_zero(+1), one(f));
  } else {
    if (opt.window.empty())
      throw ConfigError("the Fp bound sweep requires --window");
    ExpWindow w = parse_window(opt.window);
    axis = enumerate_floats(f, make_zero(+1), one(f), w);
  }
  Rational eps = rs.epsilon ? *rs.epsilon : Rational();
  Report rep = verify_bound(net, plan, eps, axis);
  if (!opt.out.empty()) write_json_file(opt.out, serialize(net));
  std::vector<Report> reports{std::move(rep)};
  return emit_reports(reports, opt.report_path);
}

struct EvalOptions {
  std::string net_path;
  std::string input;
  bool show_trace = false;
};

int run_eval(const EvalOptions& opt) {
  Network net = deserialize(read_json_file(opt.net_path));
  std::vector<Float> x;
  std::string cur;
  for (size_t i = 0; i <= opt.input.size(); ++i) {
    if (i == opt.input.size() || opt.input[i] == ',') {
      if (!cur.empty()) x.push_back(parse_input_value(net.format, cur));
      cur.clear();
    } else {
      cur.push_back(opt.input[i]);
    }
  }
  if (x.size() != net.input_dim)
    throw ShapeMismatch("network expects " + std::to_string(net.input_dim) + " inputs, got " +
                        std::to_string(x.size()));
  EvalTrace trace;
  EvalResult r = eval_traced(net, x, trace);
  std::printf("%s\n", format_text(net.format, r.output).c_str());
  std::fprintf(stderr, "overflow_seen=%d nan_seen=%d inexact_ops=%llu\n",
               r.flags.overflow_seen ? 1 : 0, r.flags.nan_seen ? 1 : 0,
               static_cast<unsigned long long>(r.flags.inexact_ops));
  if (opt.show_trace) {
    for (size_t l = 0; l < trace.layers.size(); ++l) {
      for (size_t i = 0; i < trace.layers[l].size(); ++i) {
        const NeuronTrace& nt = trace.layers[l][i];
        std::fprintf(stderr, "layer %zu neuron %zu: pre=%s post=%s inexact=%u\n", l + 1, i + 1,
                     format_text(net.format, nt.pre).c_str(),
                     format_text(net.format, nt.post).c_str(), nt.inexact_ops);
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floatnet: parametric floating-point emulator, exact network evaluator, "
               "constructive builders, and verification suites"};
  app.require_subcommand(1);

  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--format", vo.format_spec, "format spec, fp:p=N or fpq:p=N,q=M")
      ->required();
  verify->add_option("--suite", vo.suites,
                     "suites: lemmas, oscillation, gadgets, memorize, approx, overflow, "
                     "hardware-conformance, catastrophic")
      ->required()
      ->delimiter(',');
  verify->add_option("--window", vo.window, "Fp exponent window LO:HI");
  verify->add_option("--seed", vo.seed, "seed for randomized suites");
  verify->add_option("--trials", vo.trials, "trial count override");
  verify->add_option("--out", vo.out, "write the report array to this file");

  MemorizeOptions mo;
  CLI::App* memorize = app.add_subcommand("memorize", "build a memorizer network from a dataset");
  memorize->add_option("--format", mo.format_spec)->required();
  memorize->add_option("--activation", mo.activation, "step or relu");
  memorize->add_option("--dataset", mo.dataset_path, "dataset document (JSON)")->required();
  memorize->add_option("--out", mo.out, "write the network document here");

  ApproximateOptions ao;
  CLI::App* approx = app.add_subcommand("approximate",
                                        "build a grid approximator for a target function");
  approx->add_option("--format", ao.format_spec)->required();
  approx->add_option("--activation", ao.activation, "step or relu");
  approx->add_option("--function", ao.function, "target expression, e.g. x^2 or x1*x2")
      ->required();
  approx->add_option("--epsilon", ao.epsilon, "error budget (decimal or a/b)");
  approx->add_option("--lipschitz", ao.lipschitz, "Lipschitz constant of the target");
  approx->add_option("--delta", ao.delta, "explicit cell width");
  approx->add_option("-d,--dim", ao.d, "input dimension");
  approx->add_option("--window", ao.window, "Fp exponent window LO:HI for the bound sweep");
  approx->add_option("--out", ao.out, "write the network document here");
  approx->add_option("--report", ao.report_path, "write the bound report here");

  EvalOptions eo;
  CLI::App* evalc = app.add_subcommand("eval", "evaluate a network document on one input");
  evalc->add_option("--net", eo.net_path, "network document (JSON)")->required();
  evalc->add_option("--input", eo.input, "comma-separated input values")->required();
  evalc->add_flag("--trace", eo.show_trace, "print the per-neuron trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return run_verify(vo);
    if (*memorize) return run_memorize(mo);
    if (*approx) return run_approximate(ao);
    if (*evalc) return run_eval(eo);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 2;
}
