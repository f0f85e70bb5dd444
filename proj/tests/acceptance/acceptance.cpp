// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pow2qe/context.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/exponent_arith.hpp"
#include "pow2qe/harness.hpp"
#include "pow2qe/mutation.hpp"
#include "pow2qe/pipeline.hpp"
#include "pow2qe/rational.hpp"
#include "pow2qe/rcf.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

// Pinned budgets. Arithmetic is exact, so agreement tolerances are zero.
constexpr std::size_t kInstances = 50;
constexpr std::size_t kSamples = 200;
constexpr double kSuiteSeconds = 300;
constexpr std::size_t kThetas = 500;
constexpr long kMaxPeriod = 360;
constexpr double kThetaSeconds = 30;
constexpr std::size_t kRcfSamples = 200;
constexpr double kRcfSeconds = 600;
constexpr std::size_t kMinCorpus = 50;
constexpr double kCorpusSeconds = 1800;
constexpr const char* kDensityAxiom = "forall x. x > 0 -> exists y. A(y) and y <= x and x < 2*y";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

struct Line {
  bool pass = false;
  std::string summary;
  std::vector<std::string> notes;
};

// Outputs that must be quantifier-free and division-free (criterion 5).
struct Postconditions {
  std::size_t outputs = 0;
  std::size_t suite_checked = 0;
  std::vector<std::string> violations;

  void qe_output(const std::string& where, const Formula& g) {
    ++outputs;
    if (!is_quantifier_free(g)) violations.push_back(where + ": quantifier in output");
    if (g.has_division()) violations.push_back(where + ": division in output");
  }
};

// ---------------------------------------------------------------------------

Line lemma_suite(Postconditions& post) {
  auto t0 = Clock::now();
  SuiteOptions opt;
  opt.instances = kInstances;
  opt.samples = kSamples;
  SuiteSummary sum = run_lemma_suite(opt);
  double t = seconds_since(t0);
  Line line;
  std::size_t samples = 0, failures = 0;
  bool sizes = true;
  for (const auto& o : sum.ops) {
    samples += o.samples;
    failures += o.failures;
    sizes = sizes && o.instances >= kInstances && o.samples >= kInstances * kSamples;
    post.suite_checked += o.instances;
    if (o.violations) {
      std::ostringstream v;
      v << lemma_op_name(o.op) << ": " << o.violations << " postcondition violations";
      post.violations.push_back(v.str());
    }
    if (o.first_failure) {
      const LemmaReport& r = *o.first_failure;
      std::ostringstream n;
      n << lemma_op_name(o.op) << " seed " << r.seed << " on " << r.instance.substr(0, 160);
      if (r.failure) {
        n << ": " << r.failure->detail << " (expected " << r.failure->expected << ", got "
          << r.failure->actual << ")";
        for (const auto& [k, v] : r.failure->assignment) n << " " << k << "=" << to_string(v);
      }
      line.notes.push_back(n.str());
    }
  }
  line.pass = failures == 0 && sizes && t < kSuiteSeconds;
  std::ostringstream s;
  s << sum.ops.size() << " checks x " << kInstances << " instances, " << samples << " samples, "
    << failures << " failing instances, " << secs(t) << " (limit " << kSuiteSeconds << "s)";
  line.summary = s.str();
  return line;
}

// ---------------------------------------------------------------------------
// Exponent decision against plain enumeration of 2^0 .. 2^(L-1)

Formula random_theta(std::mt19937_64& rng, std::vector<long>& moduli, int depth) {
  static const long divisors[] = {1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 18, 20, 24,
                                  30, 36, 40, 45, 60, 72, 90, 120, 180, 360};
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  if (depth == 0 || pick(0, 2) == 0) {
    long n = divisors[pick(0, 23)];
    long s = pick(0, n - 1);
    moduli.push_back(n);
    Term x = Term::var("x");
    Formula a = Formula::dvd(n, s == 0 ? x : Term::pow2(s) * x);
    return pick(0, 3) == 0 ? Formula::negation(a) : a;
  }
  Formula l = random_theta(rng, moduli, depth - 1), r = random_theta(rng, moduli, depth - 1);
  Formula f = pick(0, 1) ? Formula::conj(l, r) : Formula::disj(l, r);
  return pick(0, 5) == 0 ? Formula::negation(f) : f;
}

Line exponent_decision() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t agree = 0, sat = 0;
  Line line;
  for (std::size_t i = 0; i < kThetas; ++i) {
    std::vector<long> moduli;
    Formula theta = random_theta(rng, moduli, 3);
    long period = std::accumulate(moduli.begin(), moduli.end(), 1L, [](long a, long b) { return std::lcm(a, b); });
    std::optional<long> first;
    for (long j = 0; j < period && !first; ++j)
      if (eval_qf(theta, {{"x", pow2(j)}})) first = j;
    ThetaDecision d = decide_exists_theta(ExponentConstraint("x", theta));
    bool ok = period <= kMaxPeriod && d.sat == first.has_value() && (!first || d.witness == first);
    if (ok) ++agree;
    else if (line.notes.size() < 5)
      line.notes.push_back(print(theta) + ": decided " + (d.sat ? "sat" : "unsat") + ", enumeration " +
                           (first ? "sat at 2^" + std::to_string(*first) : "unsat"));
    sat += first.has_value();
  }
  double t = seconds_since(t0);
  line.pass = agree == kThetas && t < kThetaSeconds;
  std::ostringstream s;
  s << agree << "/" << kThetas << " agree (" << sat << " satisfiable), M <= " << kMaxPeriod << ", "
    << secs(t) << " (limit " << kThetaSeconds << "s)";
  line.summary = s.str();
  return line;
}

// ---------------------------------------------------------------------------

Line rcf_kernel(Postconditions& post) {
  auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  auto corpus = rcf_corpus();
  std::size_t checked = 0, mismatches = 0;
  Line line;
  for (const auto& in : corpus) {
    Formula q = qe_rcf(in.formula);
    post.qe_output("qe_rcf " + in.text, q);
    for (std::size_t i = 0; i < kRcfSamples; ++i) {
      Assignment a;
      Formula s = in.formula;
      for (const auto& p : in.params) {
        a[p] = sample_rational(rng);
        s = substitute(s, p, Term::constant(a[p]));
      }
      bool want = rcf_oracle(s), got = eval_qf(q, a);
      ++checked;
      if (want == got) continue;
      if (++mismatches <= 5) {
        std::ostringstream n;
        n << in.text << " at";
        for (const auto& [k, v] : a) n << " " << k << "=" << to_string(v);
        n << ": oracle " << want << ", elimination " << got;
        line.notes.push_back(n.str());
      }
    }
  }
  double t = seconds_since(t0);
  line.pass = mismatches == 0 && corpus.size() >= 30 && t < kRcfSeconds;
  std::ostringstream s;
  s << corpus.size() << " instances, " << checked - mismatches << "/" << checked << " samples agree, "
    << secs(t) << " (limit " << kRcfSeconds << "s)";
  line.summary = s.str();
  return line;
}

// ---------------------------------------------------------------------------

Line sentences(Postconditions& post) {
  auto t0 = Clock::now();
  auto corpus = sentence_corpus();
  std::size_t agree = 0;
  bool density = false;
  Line line;
  for (const auto& it : corpus) {
    density = density || it.text == kDensityAxiom;
    std::string got;
    try {
      QeContext ctx;
      Formula g = eliminate_all(it.sentence, &ctx);
      post.qe_output("eliminate_all " + it.text, g);
      bool v = decide_ground_sentence(g);
      got = v ? "true" : "false";
      if (v == it.truth) {
        ++agree;
        continue;
      }
    } catch (const std::exception& e) {
      got = std::string("error: ") + e.what();
    }
    line.notes.push_back(it.text + ": " + oracle_name(it.oracle) + " says " + (it.truth ? "true" : "false") +
                         ", elimination " + got);
  }
  double t = seconds_since(t0);
  line.pass = agree == corpus.size() && corpus.size() >= kMinCorpus && density && t < kCorpusSeconds;
  std::ostringstream s;
  s << agree << "/" << corpus.size() << " sentences agree" << (density ? ", density axiom included" : ", DENSITY AXIOM MISSING")
    << ", " << secs(t) << " (limit " << kCorpusSeconds << "s)";
  line.summary = s.str();
  return line;
}

// ---------------------------------------------------------------------------

Line postconditions(const Postconditions& post) {
  Line line;
  line.pass = post.violations.empty() && post.outputs > 0 && post.suite_checked > 0;
  for (std::size_t i = 0; i < post.violations.size() && i < 5; ++i) line.notes.push_back(post.violations[i]);
  std::ostringstream s;
  s << post.violations.size() << " violations over " << post.outputs << " elimination outputs and "
    << post.suite_checked << " suite instances";
  line.summary = s.str();
  return line;
}

// ---------------------------------------------------------------------------
// Growth: the same conditions over one and over two powers of two

struct GrowthPair {
  const char* one;
  const char* two;
};

const GrowthPair kGrowth[] = {
    {"exists x. A(x) and y < x and x < 3*y",
     "exists x, z. A(x) and A(z) and y < x and x < z and z < 3*y"},
    {"exists x. A(x) and x*x = y", "exists x, z. A(x) and A(z) and x*z = y and x < z"},
    {"exists x. A(x) and D[2](x) and y < x",
     "exists x, z. A(x) and A(z) and D[2](x) and y < x and x < z and D[3](z)"},
    {"exists x. A(x) and L(y) = 2*x", "exists x, z. A(x) and A(z) and L(y) = x + z"},
    {"exists x. A(x) and x + y = 3", "exists x, z. A(x) and A(z) and x + z = y"},
};

struct Run {
  bool ok = false;
  std::size_t peak = 0;
  std::string note;
};

Run stats_run(const char* text, Postconditions& post) {
  Run r;
  try {
    QeContext ctx;
    Formula g = eliminate_all(parse_formula(text), &ctx);
    post.qe_output(std::string("stats ") + text, g);
    const auto& its = ctx.report().iterations;
    bool monotone = !its.empty();
    for (std::size_t i = 1; i < its.size(); ++i)
      monotone = monotone && its[i].rcf_calls >= its[i - 1].rcf_calls && its[i].millis >= its[i - 1].millis;
    for (const auto& it : its) r.peak = std::max(r.peak, it.length_dn_weighted);
    r.ok = monotone;
    if (!monotone) r.note = std::string(text) + ": report not monotone";
  } catch (const std::exception& e) {
    r.note = std::string(text) + ": " + e.what();
  }
  return r;
}

Line growth(Postconditions& post) {
  auto t0 = Clock::now();
  Line line;
  std::size_t good = 0;
  std::ostringstream peaks;
  for (const auto& p : kGrowth) {
    Run a = stats_run(p.one, post), b = stats_run(p.two, post);
    for (const auto* r : {&a, &b})
      if (!r->note.empty()) line.notes.push_back(r->note);
    bool larger = b.peak > a.peak;
    if (!larger) line.notes.push_back(std::string(p.two) + ": length not above the one-quantifier case");
    good += a.ok && b.ok && larger;
    peaks << " " << a.peak << "<" << b.peak;
  }
  std::size_t n = std::size(kGrowth);
  line.pass = good == n;
  std::ostringstream s;
  s << good << "/" << n << " pairs monotone with larger two-quantifier length (peaks" << peaks.str() << "), "
    << secs(seconds_since(t0));
  line.summary = s.str();
  return line;
}

// ---------------------------------------------------------------------------

Line mutations() {
  auto t0 = Clock::now();
  Line line;
  std::size_t detected = 0;
  for (auto m : all_mutations()) {
    MutationOutcome o = check_mutation(m, kInstances, kSamples);
    if (o.detected) ++detected;
    else line.notes.push_back(mutation_name(m) + " not detected");
  }
  line.pass = detected == all_mutations().size() && detected == 10;
  std::ostringstream s;
  s << detected << "/" << all_mutations().size() << " mutations detected, " << secs(seconds_since(t0));
  line.summary = s.str();
  return line;
}

}  // namespace

int main() {
  const char* names[] = {"lemma suite",   "exponent decision",      "rcf kernel", "sentence corpus",
                         "postconditions", "growth instrumentation", "mutation sensitivity"};
  Postconditions post;
  std::vector<Line> lines(7);
  auto run = [&](int k, auto fn) {
    std::cerr << "running criterion " << k << " (" << names[k - 1] << ")" << std::endl;
    lines[k - 1] = fn();
  };
  run(1, [&] { return lemma_suite(post); });
  run(2, [&] { return exponent_decision(); });
  run(3, [&] { return rcf_kernel(post); });
  run(4, [&] { return sentences(post); });
  run(6, [&] { return growth(post); });
  run(7, [&] { return mutations(); });
  lines[4] = postconditions(post);

  bool all = true;
  for (int k = 1; k <= 7; ++k) {
    const Line& l = lines[k - 1];
    all = all && l.pass;
    std::cout << "criterion " << k << " (" << names[k - 1] << "): " << (l.pass ? "PASS" : "FAIL") << "  "
              << l.summary << "\n";
    for (const auto& n : l.notes) std::cout << "    " << n << "\n";
  }
  return all ? 0 : 1;
}
