// Command-line front end: qe, decide, eval, stats, selftest.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pow2qe/context.hpp"
#include "pow2qe/errors.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/harness.hpp"
#include "pow2qe/pipeline.hpp"
#include "pow2qe/rational.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;
using nlohmann::json;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct Options {
  std::size_t max_size = Limits{}.max_size;
  double max_seconds = Limits{}.max_seconds;
  std::uint64_t seed = 0;
  bool json = false;

  Limits limits() const {
    Limits l;
    l.max_size = max_size;
    l.max_seconds = max_seconds;
    return l;
  }
};

// "x=4,y=3/2"
Assignment parse_assignment(const std::string& text) {
  Assignment a;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t comma = text.find(',', at);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(at, comma - at);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("bad assignment '" + item + "'");
    a[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    at = comma + 1;
  }
  return a;
}

void emit(const Options& o, const json& j, const std::string& plain) {
  if (o.json) std::cout << j.dump() << "\n";
  else std::cout << plain << "\n";
}

int run_qe(const Options& o, const std::string& text) {
  Formula f = parse_formula(text);
  QeContext ctx(o.limits());
  Formula g = eliminate_all(f, &ctx);
  emit(o, {{"input", print(f)}, {"output", print(g)}}, print(g));
  return 0;
}

int run_decide(const Options& o, const std::string& text) {
  Formula f = parse_formula(text);
  QeContext ctx(o.limits());
  bool truth = decide_sentence(f, &ctx);
  emit(o, {{"input", print(f)}, {"truth", truth}}, truth ? "true" : "false");
  return truth ? kTrue : kFalse;
}

int run_eval(const Options& o, const std::string& text, const std::string& assign) {
  Formula f = parse_formula(text);
  bool truth = eval_qf(f, parse_assignment(assign));
  emit(o, {{"input", print(f)}, {"truth", truth}}, truth ? "true" : "false");
  return 0;
}

int run_stats(const Options& o, const std::string& text) {
  Formula f = parse_formula(text);
  try {
    std::cout << collect_stats(f, o.limits()).to_json() << "\n";
  } catch (const GuardrailError& e) {
    std::cout << e.partial().to_json() << "\n";
    throw;
  }
  return 0;
}

int run_selftest(const Options& o, std::size_t instances, std::size_t samples,
                 const std::vector<std::string>& ops) {
  SuiteOptions s;
  s.instances = instances;
  s.samples = samples;
  s.seed = o.seed;
  if (!ops.empty()) {
    s.ops.clear();
    for (const auto& name : ops) {
      auto op = lemma_op_from_name(name);
      if (!op) throw std::invalid_argument("unknown check '" + name + "'");
      s.ops.push_back(*op);
    }
  }
  SuiteSummary sum = run_lemma_suite(s);
  std::cout << sum.to_json() << "\n";
  return sum.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantifier elimination for the reals with powers of two"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--max-size", o.max_size, "node cap for intermediate formulas");
  app.add_option("--max-seconds", o.max_seconds, "wall-clock cap per query");
  app.add_option("--seed", o.seed, "seed for randomized checks");
  app.add_flag("--json", o.json, "machine-readable output");

  std::string text, assign;
  auto* qe = app.add_subcommand("qe", "print a quantifier-free equivalent");
  qe->add_option("formula", text)->required();
  auto* decide = app.add_subcommand("decide", "decide a sentence (exit 0 true, 1 false)");
  decide->add_option("sentence", text)->required();
  auto* eval = app.add_subcommand("eval", "evaluate a quantifier-free formula");
  eval->add_option("formula", text)->required();
  eval->add_option("--assign", assign, "x=4,y=3/2");
  auto* stats = app.add_subcommand("stats", "growth report of the elimination as JSON");
  stats->add_option("formula", text)->required();
  std::size_t instances = 50, samples = 200;
  std::vector<std::string> ops;
  auto* selftest = app.add_subcommand("selftest", "run the rewrite equivalence checks");
  selftest->add_option("--instances", instances, "instances per check");
  selftest->add_option("--samples", samples, "samples per instance");
  selftest->add_option("--check", ops, "restrict to the named checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*qe) return run_qe(o, text);
    if (*decide) return run_decide(o, text);
    if (*eval) return run_eval(o, text, assign);
    if (*stats) return run_stats(o, text);
    if (*selftest) return run_selftest(o, instances, samples, ops);
  } catch (const ParseError& e) {
    std::cerr << "parse error " << e.what() << "\n";
  } catch (const GuardrailError& e) {
    std::cerr << "guardrail: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
