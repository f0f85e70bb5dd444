#include "pow2qe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "json.hpp"
#include "pow2qe/division_elim.hpp"
#include "pow2qe/errors.hpp"
#include "pow2qe/exponent_arith.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/poly.hpp"
#include "pow2qe/simple_form.hpp"
#include "pow2qe/syntax.hpp"
#include "pow2qe/univariate.hpp"

namespace pow2qe {

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Rational fraction(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational coefficient(std::mt19937_64& rng) {
  if (coin(rng, 0.7)) {
    long c = uniform(rng, 1, 4);
    return coin(rng, 0.5) ? Rational(c) : Rational(-c);
  }
  long p = uniform(rng, 1, 9), q = uniform(rng, 2, 5);
  return coin(rng, 0.5) ? fraction(p, q) : fraction(-p, q);
}

Rational positive_coefficient(std::mt19937_64& rng) {
  return fraction(uniform(rng, 1, 9), uniform(rng, 1, 5));
}

Rational power_sample(std::mt19937_64& rng, long bound = 12) { return pow2(uniform(rng, -bound, bound)); }

std::uint64_t mix_seed(std::uint64_t seed, LemmaOp op) {
  return seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(op) * 1000003ULL + 17;
}

Term factor(std::mt19937_64& rng, const GenProfile& p, int lambda_left) {
  long r = uniform(rng, 0, 9);
  if (lambda_left > 0 && r < 3) return Term::lambda(gen_term(rng, p, lambda_left - 1));
  if (p.division && r == 3) {
    GenProfile flat = p;
    flat.division = false;
    return Term::quotient(gen_term(rng, flat, lambda_left), gen_term(rng, flat, 0));
  }
  return Term::var(p.vars[uniform(rng, 0, static_cast<long>(p.vars.size()) - 1)]);
}

Formula compare_terms(std::mt19937_64& rng, const Term& a, const Term& b) {
  switch (uniform(rng, 0, 5)) {
    case 0: return Formula::eq(a, b);
    case 1: return Formula::lt(a, b);
    case 2: return Formula::le(a, b);
    case 3: return Formula::gt(a, b);
    case 4: return Formula::ge(a, b);
    default: return Formula::ne(a, b);
  }
}

Formula gen_atom(std::mt19937_64& rng, const GenProfile& p) {
  if (!p.moduli.empty() && coin(rng, 0.3)) {
    long n = p.moduli[uniform(rng, 0, static_cast<long>(p.moduli.size()) - 1)];
    return Formula::dvd(n, gen_term(rng, p, p.lambda_nesting));
  }
  return compare_terms(rng, gen_term(rng, p, p.lambda_nesting), gen_term(rng, p, p.lambda_nesting));
}

Formula gen_bool(std::mt19937_64& rng, const GenProfile& p, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) return gen_atom(rng, p);
  long r = uniform(rng, 0, 6);
  if (r == 0) return Formula::negation(gen_bool(rng, p, depth - 1));
  Formula a = gen_bool(rng, p, depth - 1), b = gen_bool(rng, p, depth - 1);
  return r <= 3 ? Formula::conj(a, b) : Formula::disj(a, b);
}

// A term with exactly k nested roundings around some variable.
Term nested_lambda(std::mt19937_64& rng, const GenProfile& p, int k) {
  GenProfile flat = p;
  flat.division = false;
  Term t = Term::var(p.vars[uniform(rng, 0, static_cast<long>(p.vars.size()) - 1)]);
  for (int i = 0; i < k; ++i) t = Term::lambda(coin(rng, 0.5) ? t : t + gen_term(rng, flat, 0));
  return t;
}

}  // namespace

Rational sample_rational(std::mt19937_64& rng) {
  long r = uniform(rng, 0, 9);
  if (r < 3) {
    Rational v = pow2(uniform(rng, -8, 8));
    return coin(rng, 0.8) ? v : Rational(-v);
  }
  if (r < 6) return Rational(uniform(rng, -12, 12));
  long p = uniform(rng, 1, 64), q = uniform(rng, 1, 16);
  return coin(rng, 0.7) ? fraction(p, q) : fraction(-p, q);
}

Term gen_term(std::mt19937_64& rng, const GenProfile& p, int lambda_left) {
  long summands = uniform(rng, 1, 2);
  Term out;
  for (long s = 0; s < summands; ++s) {
    Term m = Term::constant(coefficient(rng));
    long deg = uniform(rng, s == 0 ? 1 : 0, std::max(1, p.max_degree));
    for (long d = 0; d < deg; ++d) m = m * factor(rng, p, lambda_left);
    out = s == 0 ? m : out + m;
  }
  return out;
}

Formula gen_formula(std::uint64_t seed, const GenProfile& profile) {
  std::mt19937_64 rng(seed);
  Formula f = gen_bool(rng, profile, profile.depth);
  if (profile.lambda_nesting > 0) {
    GenProfile flat = profile;
    flat.lambda_nesting = 0;
    flat.division = false;
    Formula forced =
        compare_terms(rng, nested_lambda(rng, profile, profile.lambda_nesting), gen_term(rng, flat, 0));
    f = coin(rng, 0.5) ? Formula::conj(forced, f) : Formula::disj(forced, f);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Lemma checks

const std::vector<LemmaOp>& all_lemma_ops() {
  static const std::vector<LemmaOp> ops{
      LemmaOp::LambdaWindow,       LemmaOp::DnShiftCover,        LemmaOp::RewriteLambdaQuotient,
      LemmaOp::QuotientNormalForm, LemmaOp::ClearLambdaDivision, LemmaOp::DnOfQuotient,
      LemmaOp::EliminateDivision,  LemmaOp::LambdaPolyCases,     LemmaOp::LambdaPolyCasesEquality,
      LemmaOp::LambdaPolyMonomial, LemmaOp::SqueezeLambda,       LemmaOp::DnPolyCases,
      LemmaOp::DnMonomialSplit,    LemmaOp::MakeSimple,          LemmaOp::ExponentPeriod};
  return ops;
}

std::string lemma_op_name(LemmaOp op) {
  switch (op) {
    case LemmaOp::LambdaWindow: return "lambda_window";
    case LemmaOp::DnShiftCover: return "dn_shift_cover";
    case LemmaOp::RewriteLambdaQuotient: return "rewrite_lambda_quotient";
    case LemmaOp::QuotientNormalForm: return "quotient_normal_form";
    case LemmaOp::ClearLambdaDivision: return "clear_lambda_division";
    case LemmaOp::DnOfQuotient: return "dn_of_quotient";
    case LemmaOp::EliminateDivision: return "eliminate_division";
    case LemmaOp::LambdaPolyCases: return "lambda_poly_cases";
    case LemmaOp::LambdaPolyCasesEquality: return "lambda_poly_cases_equality";
    case LemmaOp::LambdaPolyMonomial: return "lambda_poly_monomial";
    case LemmaOp::SqueezeLambda: return "squeeze_lambda";
    case LemmaOp::DnPolyCases: return "dn_poly_cases";
    case LemmaOp::DnMonomialSplit: return "dn_monomial_split";
    case LemmaOp::MakeSimple: return "make_simple";
    case LemmaOp::ExponentPeriod: return "exponent_period";
  }
  return "?";
}

std::optional<LemmaOp> lemma_op_from_name(const std::string& name) {
  for (auto op : all_lemma_ops())
    if (lemma_op_name(op) == name) return op;
  return std::nullopt;
}

namespace {

struct Checker {
  LemmaReport& report;
  std::mt19937_64& rng;

  // Records a mismatch; returns false so callers can stop.
  bool expect(bool expected, bool actual, const Assignment& a, const std::string& what) {
    if (expected == actual) return true;
    report.failure = Counterexample{a, expected, actual, what};
    return false;
  }
};

bool div_under_lambda(const Term& t, bool inside) {
  switch (t.kind()) {
    case TermKind::Div:
      return inside || div_under_lambda(t.lhs(), inside) || div_under_lambda(t.rhs(), inside);
    case TermKind::Lambda:
      return div_under_lambda(t.arg(), true);
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
      return div_under_lambda(t.lhs(), inside) || div_under_lambda(t.rhs(), inside);
    default:
      return false;
  }
}

bool div_under_lambda(const Formula& f) {
  bool found = false;
  for_each_term(f, [&](const Term& t) { found = found || div_under_lambda(t, false); });
  return found;
}

bool has_division(const Formula& f) {
  bool found = false;
  for_each_term(f, [&](const Term& t) { found = found || t.has_division(); });
  return found;
}

Assignment random_params(std::mt19937_64& rng, const std::set<std::string>& vars,
                         const std::string& skip = "") {
  Assignment a;
  for (const auto& v : vars)
    if (v != skip) a[v] = sample_rational(rng);
  return a;
}

// p(x) with coefficients drawn as rationals or parameter variables a0, a1, ...
PolyInX random_poly(std::mt19937_64& rng, long deg, double param_rate, double zero_rate) {
  std::vector<Poly> cs;
  for (long i = 0; i <= deg; ++i) {
    if (i < deg && coin(rng, zero_rate)) cs.push_back(Poly());
    else if (coin(rng, param_rate)) cs.push_back(Poly::variable("a" + std::to_string(i)));
    else cs.push_back(Poly(coefficient(rng)));
  }
  return *as_poly_in(Poly::from_coeffs("x", cs), "x");
}

// c + a_1 x + ... + a_d x^d with rational a_i and parameter c.
PolyInX planted_poly(std::mt19937_64& rng, long deg, std::vector<Rational>& as) {
  as.assign(deg + 1, Rational(0));
  std::vector<Poly> cs{Poly::variable("c")};
  for (long i = 1; i <= deg; ++i) {
    as[i] = (i == deg || coin(rng, 0.7)) ? coefficient(rng) : Rational(0);
    cs.push_back(Poly(as[i]));
  }
  return *as_poly_in(Poly::from_coeffs("x", cs), "x");
}

Rational tail_value(const std::vector<Rational>& as, const Rational& x) {
  Rational v = 0, xp = 1;
  for (std::size_t i = 1; i < as.size(); ++i) {
    xp *= x;
    v += as[i] * xp;
  }
  return v;
}

// t or -t, whichever is positive at a random point, so that the positivity
// precondition is met often enough.
Term positive_somewhere(std::mt19937_64& rng, const Term& t) {
  for (int i = 0; i < 20; ++i) {
    int s = sgn(eval_term(t, random_params(rng, free_vars(t))));
    if (s != 0) return s > 0 ? t : Term::constant(-1) * t;
  }
  return t;
}

// How many of `n` random draws satisfy `ok`.
template <class Ok>
int probe_rate(int n, Ok ok) {
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += ok() ? 1 : 0;
  return hits;
}

Formula theta_disjunction(const std::vector<LambdaClause>& cs) {
  std::vector<Formula> ds;
  for (const auto& c : cs) ds.push_back(c.theta);
  return disj_all(ds);
}

// Draws until `samples` points meet the precondition, with a cap on tries.
template <class Fn>
void sample_loop(LemmaReport& report, std::size_t samples, Fn one) {
  std::size_t tries = 0;
  while (report.checked < samples && !report.failure && tries++ < samples * 60) one();
}

void check_formula_rewrite(Checker& c, std::size_t samples, const Formula& f, const Formula& g,
                           const std::string& pow2_var) {
  auto vars = free_vars(f);
  for (const auto& v : free_vars(g)) vars.insert(v);
  sample_loop(c.report, samples, [&] {
    Assignment a = random_params(c.rng, vars, pow2_var);
    if (!pow2_var.empty()) a[pow2_var] = power_sample(c.rng);
    ++c.report.checked;
    c.expect(eval_qf(f, a), eval_qf(g, a), a, "rewritten formula disagrees");
  });
}

void run_check(LemmaOp op, std::mt19937_64& rng, std::size_t samples, LemmaReport& rep) {
  Checker c{rep, rng};
  switch (op) {
    case LemmaOp::LambdaWindow: {
      long n = uniform(rng, 1, 6);
      Rational k = coin(rng, 0.5) ? Rational(1) : positive_coefficient(rng);
      Term u = k == 1 ? Term::var("u") : Term::constant(k) * Term::var("u");
      Formula w = lambda_window(u, "x", n);
      rep.instance = "u = " + print(u) + ", n = " + std::to_string(n);
      // 0 < u < x <= 2^n u: put u in the octave [x/2^j, x/2^(j-1))
      sample_loop(rep, samples, [&] {
        Rational x = power_sample(rng);
        long j = uniform(rng, 1, n);
        Rational uval = x * pow2(-j) * fraction(16 + uniform(rng, 0, 15), 16);
        Assignment a{{"x", x}, {"u", uval / k}};
        ++rep.checked;
        c.expect(true, eval_qf(w, a), a, "no window disjunct holds");
      });
      break;
    }
    case LemmaOp::DnShiftCover: {
      long n = uniform(rng, 1, 8);
      Formula f = dn_shift_cover("x", n);
      rep.instance = "n = " + std::to_string(n);
      sample_loop(rep, samples, [&] {
        Assignment a{{"x", power_sample(rng, 30)}};
        ++rep.checked;
        c.expect(true, eval_qf(f, a), a, "no shift covers x");
      });
      break;
    }
    case LemmaOp::RewriteLambdaQuotient: {
      GenProfile p{1, {"a", "b"}, 1, {}, false, 2};
      Term x, y;
      // redraw until both sides are positive often enough to sample
      for (int attempt = 0; attempt < 50; ++attempt) {
        x = positive_somewhere(rng, gen_term(rng, p, 1));
        y = positive_somewhere(rng, gen_term(rng, p, 1));
        if (probe_rate(100, [&] {
              Assignment a = random_params(rng, {"a", "b"});
              return sgn(eval_term(x, a)) > 0 && sgn(eval_term(y, a)) > 0;
            }) >= 10)
          break;
      }
      auto cases = rewrite_lambda_quotient(x, y);
      rep.instance = "x = " + print(x) + ", y = " + print(y);
      sample_loop(rep, samples, [&] {
        Assignment a = random_params(rng, {"a", "b"});
        Rational xv = eval_term(x, a), yv = eval_term(y, a);
        if (sgn(xv) <= 0 || sgn(yv) <= 0) return;
        ++rep.checked;
        Rational want = lambda_of(xv / yv);
        bool covered = false;
        for (const auto& cs : cases) {
          if (!eval_qf(cs.guard, a)) continue;
          covered = true;
          if (!c.expect(true, eval_term(cs.result, a) == want, a, "case value differs")) return;
        }
        c.expect(true, covered, a, "no guard holds");
      });
      break;
    }
    case LemmaOp::QuotientNormalForm: {
      GenProfile p{1, {"a", "b"}, 1, {}, true, 2};
      GenProfile flat{1, {"a", "b"}, 0, {}, false, 2};
      Term t = coin(rng, 0.5) ? Term::lambda(Term::quotient(gen_term(rng, flat, 0), gen_term(rng, flat, 0)))
                              : gen_term(rng, p, 1);
      auto cases = quotient_normal_form(t);
      rep.instance = print(t);
      sample_loop(rep, samples, [&] {
        Assignment a = random_params(rng, {"a", "b"});
        Rational tv = eval_term(t, a);
        ++rep.checked;
        bool covered = false;
        for (const auto& cs : cases) {
          if (!eval_qf(cs.guard, a)) continue;
          covered = true;
          Rational den = eval_term(cs.result.den, a);
          if (!c.expect(true, sgn(den) != 0, a, "zero denominator under its guard")) return;
          if (!c.expect(true, eval_term(cs.result.num, a) / den == tv, a, "quotient differs")) return;
        }
        c.expect(true, covered, a, "no guard holds");
      });
      break;
    }
    case LemmaOp::ClearLambdaDivision:
    case LemmaOp::EliminateDivision: {
      GenProfile p{2, {"a", "b"}, 1, {1, 2}, true, 2};
      Formula f = gen_formula(rng(), p);
      bool clear = op == LemmaOp::ClearLambdaDivision;
      Formula g = clear ? clear_lambda_division(f) : eliminate_division(f);
      rep.instance = print(f);
      if (clear && div_under_lambda(g)) rep.violations.push_back("division under a rounding");
      if (!clear && has_division(g)) rep.violations.push_back("division remains");
      if (!is_quantifier_free(g)) rep.violations.push_back("quantifier in output");
      check_formula_rewrite(c, samples, f, g, "");
      break;
    }
    case LemmaOp::DnOfQuotient: {
      long n = uniform(rng, 1, 6);
      long sa = uniform(rng, 0, 2), sb = uniform(rng, 0, 2);
      Term x = Term::pow2(sa) * Term::var("a"), y = Term::pow2(sb) * Term::var("b");
      Formula f = dn_of_quotient(n, x, y);
      Formula lhs = Formula::dvd(n, Term::quotient(x, y));
      rep.instance = "n = " + std::to_string(n) + ", " + print(lhs);
      sample_loop(rep, samples, [&] {
        Assignment a{{"a", power_sample(rng, 20)}, {"b", power_sample(rng, 20)}};
        ++rep.checked;
        c.expect(eval_qf(lhs, a), eval_qf(f, a), a, "D_n of the quotient differs");
      });
      break;
    }
    case LemmaOp::LambdaPolyCases:
    case LemmaOp::LambdaPolyMonomial: {
      PolyInX p = random_poly(rng, uniform(rng, 1, 3), 0.3, 0.25);
      for (int attempt = 0; attempt < 50; ++attempt) {
        Term t = p.to_term();
        std::set<std::string> vs = free_vars(t);
        if (probe_rate(100, [&] {
              Assignment a = random_params(rng, vs, "x");
              a["x"] = power_sample(rng);
              return sgn(eval_term(t, a)) > 0;
            }) >= 10)
          break;
        p = random_poly(rng, uniform(rng, 1, 3), 0.3, 0.25);
      }
      Term pt = p.to_term();
      std::set<std::string> params = free_vars(pt);
      rep.instance = print(pt);
      if (op == LemmaOp::LambdaPolyCases) {
        Formula d = theta_disjunction(lambda_poly_cases(p, PolyMode::Inequality));
        sample_loop(rep, samples, [&] {
          Assignment a = random_params(rng, params, "x");
          a["x"] = power_sample(rng);
          if (sgn(eval_term(pt, a)) <= 0) return;
          ++rep.checked;
          c.expect(true, eval_qf(d, a), a, "no clause holds");
        });
      } else {
        auto cases = lambda_poly_monomial(p);
        sample_loop(rep, samples, [&] {
          Assignment a = random_params(rng, params, "x");
          a["x"] = power_sample(rng);
          Rational pv = eval_term(pt, a);
          if (sgn(pv) <= 0) return;
          ++rep.checked;
          bool covered = false;
          for (const auto& cs : cases) {
            if (!eval_qf(cs.guard, a)) continue;
            covered = true;
            if (!c.expect(true, eval_term(cs.result, a) == lambda_of(pv), a, "monomial differs")) return;
          }
          c.expect(true, covered, a, "no guard holds");
        });
      }
      break;
    }
    case LemmaOp::LambdaPolyCasesEquality: {
      std::vector<Rational> as;
      PolyInX p = planted_poly(rng, uniform(rng, 1, 3), as);
      bool unit = coin(rng, 0.5);
      Formula d = theta_disjunction(lambda_poly_cases(p, PolyMode::Equality, unit));
      rep.instance = print(p.to_term()) + (unit ? " = 0 at x y, 1 <= y < 2" : " = 0");
      // c is chosen so that p vanishes at x (or at x y)
      sample_loop(rep, samples, [&] {
        Rational x = power_sample(rng);
        Rational y = unit ? fraction(32 + uniform(rng, 0, 31), 32) : Rational(1);
        Assignment a{{"x", x}, {"c", -tail_value(as, x * y)}};
        ++rep.checked;
        c.expect(true, eval_qf(d, a), a, "no clause holds at a root");
      });
      break;
    }
    case LemmaOp::SqueezeLambda:
    case LemmaOp::MakeSimple: {
      GenProfile p{2, {"x", "y"}, static_cast<int>(uniform(rng, op == LemmaOp::SqueezeLambda ? 1 : 0, 2)),
                   {1, 2, 3}, false, 2};
      Formula f = gen_formula(rng(), p);
      rep.instance = print(f);
      Formula g;
      if (op == LemmaOp::SqueezeLambda) {
        g = squeeze_lambda(f, "x");
        if (lambda_depth("x", g) != 0) rep.violations.push_back("x under a rounding");
      } else {
        g = make_simple(f, "x");
        if (!is_simple_in("x", g)) rep.violations.push_back("output not simple in x");
      }
      check_formula_rewrite(c, samples, f, g, "x");
      break;
    }
    case LemmaOp::DnPolyCases: {
      long n = uniform(rng, 1, 4);
      std::vector<Rational> as;
      PolyInX p = planted_poly(rng, uniform(rng, 1, 3), as);
      Formula f = dn_poly_cases(p, n);
      Formula lhs = Formula::dvd(n, p.to_term());
      rep.instance = print(lhs);
      // half the samples make p a power of two, often one with n | exponent
      sample_loop(rep, samples, [&] {
        Rational x = power_sample(rng);
        Rational cv = coin(rng, 0.5) ? pow2(uniform(rng, -4, 4) * (coin(rng, 0.5) ? n : 1)) - tail_value(as, x)
                                     : sample_rational(rng);
        Assignment a{{"x", x}, {"c", cv}};
        if (sgn(eval_term(p.to_term(), a)) <= 0) return;
        ++rep.checked;
        c.expect(eval_qf(lhs, a), eval_qf(f, a), a, "D_n of the polynomial differs");
      });
      break;
    }
    case LemmaOp::DnMonomialSplit: {
      long n = uniform(rng, 1, 6);
      unsigned i = static_cast<unsigned>(uniform(rng, 0, 3));
      Term s = coin(rng, 0.5) ? Term::var("s") : Term::constant(positive_coefficient(rng)) * Term::var("s");
      Formula f = dn_monomial_split(s, i, n, "x");
      Formula lhs = Formula::dvd(n, s * power(Term::var("x"), i));
      rep.instance = print(lhs);
      sample_loop(rep, samples, [&] {
        Rational sv = coin(rng, 0.7) ? power_sample(rng, 20) : sample_rational(rng);
        Assignment a{{"x", power_sample(rng, 20)}, {"s", sv}};
        ++rep.checked;
        c.expect(eval_qf(lhs, a), eval_qf(f, a), a, "D_n of the monomial differs");
      });
      break;
    }
    case LemmaOp::ExponentPeriod: {
      static const long pool[] = {1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 18, 20, 24, 30, 36, 40, 45, 60, 72, 90, 120, 180, 360};
      long atoms = uniform(rng, 1, 3);
      std::vector<Formula> lits;
      for (long k = 0; k < atoms; ++k) {
        long n = pool[uniform(rng, 0, 23)];
        Formula at = ExponentConstraint::atom(n, uniform(rng, 0, n - 1), "x");
        lits.push_back(k > 0 && coin(rng, 0.4) ? Formula::negation(at) : at);
      }
      Formula theta = coin(rng, 0.7) || lits.size() < 2
                          ? conj_all(lits)
                          : Formula::disj(lits[0], conj_all(std::vector<Formula>(lits.begin() + 1, lits.end())));
      ExponentConstraint ec("x", theta);
      ThetaDecision d = decide_exists_theta(ec);
      rep.instance = print(theta);
      // enumerate well past one period in both directions
      long span = std::max<long>(static_cast<long>(samples), 4 * lcm_modulus(ec));
      bool sat = false;
      Assignment at_witness;
      for (long j = -span / 2; j < span / 2 + span % 2; ++j) {
        Assignment a{{"x", pow2(j)}};
        ++rep.checked;
        if (eval_qf(theta, a)) {
          sat = true;
          at_witness = a;
          break;
        }
      }
      if (!c.expect(sat, d.sat, at_witness, "satisfiability differs")) break;
      if (d.sat) {
        Assignment a{{"x", pow2(*d.witness)}};
        c.expect(true, eval_qf(theta, a), a, "reported witness fails");
      }
      rep.checked = std::max<std::size_t>(rep.checked, samples);
      break;
    }
  }
}

}  // namespace

LemmaReport check_lemma_equivalence(LemmaOp op, std::uint64_t seed, std::size_t samples) {
  LemmaReport rep;
  rep.op = op;
  rep.seed = seed;
  std::mt19937_64 rng(mix_seed(seed, op));
  try {
    run_check(op, rng, samples, rep);
  } catch (const std::exception& e) {
    rep.failure = Counterexample{{}, true, false, std::string("exception: ") + e.what()};
  }
  if (!rep.failure && rep.checked < samples)
    rep.failure = Counterexample{{}, true, false, "too few samples met the precondition"};
  return rep;
}

bool SuiteSummary::passed() const {
  return std::all_of(ops.begin(), ops.end(),
                     [](const OpSummary& o) { return o.failures == 0 && o.violations == 0; });
}

namespace {

nlohmann::json report_json(const LemmaReport& r) {
  nlohmann::json j = {{"op", lemma_op_name(r.op)}, {"seed", r.seed}, {"instance", r.instance},
                      {"checked", r.checked}, {"violations", r.violations}};
  if (r.failure) {
    nlohmann::json a = nlohmann::json::object();
    for (const auto& [k, v] : r.failure->assignment) a[k] = to_string(v);
    j["failure"] = {{"assignment", a}, {"expected", r.failure->expected},
                    {"actual", r.failure->actual}, {"detail", r.failure->detail}};
  }
  return j;
}

}  // namespace

std::string SuiteSummary::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& o : ops) {
    nlohmann::json j = {{"op", lemma_op_name(o.op)}, {"instances", o.instances}, {"samples", o.samples},
                        {"failures", o.failures}, {"violations", o.violations}};
    if (o.first_failure) j["first_failure"] = report_json(*o.first_failure);
    arr.push_back(j);
  }
  return nlohmann::json{{"passed", passed()}, {"ops", arr}}.dump();
}

SuiteSummary run_lemma_suite(const SuiteOptions& options) {
  // every (op, instance) item has its own seed, so workers share nothing
  std::vector<std::pair<LemmaOp, std::size_t>> items;
  for (auto op : options.ops)
    for (std::size_t i = 0; i < options.instances; ++i) items.emplace_back(op, i);
  std::vector<LemmaReport> reports(items.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < items.size();)
      reports[k] = check_lemma_equivalence(items[k].first, options.seed + items[k].second, options.samples);
  };
  std::size_t n = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n, items.size()); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  SuiteSummary s;
  std::size_t k = 0;
  for (auto op : options.ops) {
    OpSummary o;
    o.op = op;
    for (std::size_t i = 0; i < options.instances; ++i, ++k) {
      const LemmaReport& r = reports[k];
      ++o.instances;
      o.samples += r.checked;
      if (r.failure) ++o.failures;
      o.violations += r.violations.size();
      if (!r.passed() && !o.first_failure) o.first_failure = r;
    }
    s.ops.push_back(std::move(o));
  }
  return s;
}

LemmaOp mutation_target(Mutation m) {
  switch (m) {
    case Mutation::LambdaWindowDropLast: return LemmaOp::LambdaWindow;
    case Mutation::DnShiftCoverDropOne: return LemmaOp::DnShiftCover;
    case Mutation::RewriteQuotientSwap: return LemmaOp::RewriteLambdaQuotient;
    case Mutation::DnOfQuotientSkipZero: return LemmaOp::DnOfQuotient;
    case Mutation::QuotientNormalFormDropLast: return LemmaOp::QuotientNormalForm;
    case Mutation::LambdaPolyCasesDropTopDegree: return LemmaOp::LambdaPolyCases;
    case Mutation::LambdaPolyMonomialDouble: return LemmaOp::LambdaPolyMonomial;
    case Mutation::DnMonomialSplitShiftW: return LemmaOp::DnMonomialSplit;
    case Mutation::MakeSimpleShiftR: return LemmaOp::MakeSimple;
    case Mutation::ThetaTruncatedPeriod: return LemmaOp::ExponentPeriod;
    case Mutation::None: break;
  }
  throw ContractError("mutation_target: no mutation");
}

MutationOutcome check_mutation(Mutation m, std::size_t instances, std::size_t samples,
                               std::uint64_t seed) {
  MutationOutcome out;
  out.mutation = m;
  ScopedMutation active(m);
  for (std::size_t i = 0; i < instances && !out.detected; ++i) {
    LemmaReport r = check_lemma_equivalence(mutation_target(m), seed + i, samples);
    // only a disagreeing sample counts, not a shortfall or an exception
    if (r.failure && r.checked > 0 && r.failure->detail.rfind("too few", 0) != 0 &&
        r.failure->detail.rfind("exception", 0) != 0) {
      out.detected = true;
      out.witness = r;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

bool eval_with(const Formula& f, const std::function<bool(const Formula&)>& atom) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Not: return !eval_with(f.sub(), atom);
    case FormulaKind::And: return eval_with(f.left(), atom) && eval_with(f.right(), atom);
    case FormulaKind::Or: return eval_with(f.left(), atom) || eval_with(f.right(), atom);
    case FormulaKind::Exists:
    case FormulaKind::Forall: throw ContractError("eval_with: quantifier");
    default: return atom(f);
  }
}

UPoly atom_upoly(const Formula& a, const std::string& x) {
  if (a.kind() == FormulaKind::Dvd) throw ContractError("exists_univariate: D_n atom");
  auto u = to_upoly(canon_poly(a.rhs() - a.lhs()), x);
  if (!u) throw ContractError("exists_univariate: non-polynomial atom");
  return *u;
}

}  // namespace

bool exists_univariate(const Formula& phi, const std::string& x) {
  std::map<Formula, UPoly> polys;
  for_each_atom(phi, [&](const Formula& a) { polys.emplace(a, atom_upoly(a, x)); });
  UPoly prod{Rational(1)};
  for (const auto& [a, u] : polys)
    if (udegree(u) > 0) prod = umul(prod, u);
  UPoly sf = udegree(prod) > 0 ? squarefree(prod) : prod;
  auto roots = isolate_roots(sf);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    while (roots[i].hi >= roots[i + 1].lo) refine(sf, roots[i].exact() ? roots[i + 1] : roots[i]);
  }
  auto holds = [&](const std::function<int(const UPoly&)>& sign) {
    return eval_with(phi, [&](const Formula& a) {
      int s = sign(polys.at(a));
      return a.kind() == FormulaKind::Eq ? s == 0 : s > 0;
    });
  };
  auto at_point = [&](const Rational& v) {
    return holds([&](const UPoly& u) { return sgn(ueval(u, v)); });
  };
  if (roots.empty()) return at_point(Rational(0));
  if (at_point(roots.front().lo - 1) || at_point(roots.back().hi + 1)) return true;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (holds([&](const UPoly& u) { return sign_at_root(sf, roots[i], u); })) return true;
    if (i + 1 < roots.size() && at_point((roots[i].hi + roots[i + 1].lo) / 2)) return true;
  }
  return false;
}

namespace {

using Domain = std::function<std::vector<Rational>(int depth)>;

bool bounded_eval(const Formula& f, Assignment& s, const Domain& dom, int depth) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool ex = f.kind() == FormulaKind::Exists;
      auto saved = s.find(f.var()) == s.end() ? std::nullopt : std::optional<Rational>(s[f.var()]);
      bool result = !ex;
      for (const auto& v : dom(depth)) {
        s[f.var()] = v;
        if (bounded_eval(f.sub(), s, dom, depth + 1) == ex) {
          result = ex;
          break;
        }
      }
      if (saved) s[f.var()] = *saved;
      else s.erase(f.var());
      return result;
    }
    case FormulaKind::Not: return !bounded_eval(f.sub(), s, dom, depth);
    case FormulaKind::And: return bounded_eval(f.left(), s, dom, depth) && bounded_eval(f.right(), s, dom, depth);
    case FormulaKind::Or: return bounded_eval(f.left(), s, dom, depth) || bounded_eval(f.right(), s, dom, depth);
    default: return eval_qf(f, s);
  }
}

std::vector<Rational> powers(long bound) {
  std::vector<Rational> out;
  for (long k = -bound; k <= bound; ++k) out.push_back(pow2(k));
  return out;
}

std::vector<Rational> rational_grid() {
  std::vector<Rational> out{Rational(0)};
  for (long m = 1; m <= 64; ++m)
    for (long q : {1L, 3L, 4L, 7L}) {
      out.push_back(fraction(m, q));
      out.push_back(fraction(-m, q));
    }
  for (long k = -30; k <= 30; ++k) {
    out.push_back(pow2(k));
    out.push_back(pow2(k) * fraction(3, 2));
    out.push_back(-pow2(k));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<std::vector<std::pair<bool, std::string>>, Formula> split_prefix(const Formula& f) {
  std::vector<std::pair<bool, std::string>> pre;
  Formula cur = f;
  while (cur.kind() == FormulaKind::Exists || cur.kind() == FormulaKind::Forall) {
    pre.push_back({cur.kind() == FormulaKind::Exists, cur.var()});
    cur = cur.sub();
  }
  return {pre, cur};
}

}  // namespace

bool eval_over_powers(const Formula& sentence, long bound) {
  Assignment s;
  auto ps = powers(bound);
  return bounded_eval(sentence, s, [&](int) { return ps; }, 0);
}

std::string oracle_name(OracleKind k) {
  switch (k) {
    case OracleKind::ExponentEnumeration: return "exponent enumeration";
    case OracleKind::WitnessSearch: return "witness search";
    case OracleKind::RootIsolation: return "root isolation";
    case OracleKind::SampledOuter: return "sampled outer variable, exponent enumeration inside";
  }
  return "?";
}

bool derive_truth(const Formula& sentence, OracleKind kind) {
  switch (kind) {
    case OracleKind::ExponentEnumeration: {
      long depth = static_cast<long>(split_prefix(sentence).first.size());
      return eval_over_powers(sentence, depth <= 1 ? 80 : 24);
    }
    case OracleKind::WitnessSearch:
    case OracleKind::RootIsolation: {
      auto [pre, body] = split_prefix(sentence);
      if (pre.size() != 1 || !is_quantifier_free(body)) throw ContractError("derive_truth: one quantifier expected");
      bool ex = pre[0].first;
      Formula target = ex ? body : nnf(Formula::negation(body));
      bool found = kind == OracleKind::WitnessSearch ? witness_search(target, pre[0].second, {}).has_value()
                                                      : exists_univariate(target, pre[0].second);
      return ex ? found : !found;
    }
    case OracleKind::SampledOuter: {
      Assignment s;
      auto grid = rational_grid();
      auto ps = powers(60);
      return bounded_eval(sentence, s, [&](int d) { return d == 0 ? grid : ps; }, 0);
    }
  }
  return false;
}

std::vector<CorpusItem> sentence_corpus() {
  using K = OracleKind;
  static const std::vector<std::pair<const char*, K>> items{
      // exponent enumeration: every quantified variable is a power of two
      {"exists x. A(x) and 3 < x and x < 5", K::ExponentEnumeration},
      {"exists x. A(x) and 4 < x and x < 8", K::ExponentEnumeration},
      {"exists x. A(x) and D[2](x) and not D[4](x)", K::ExponentEnumeration},
      {"exists x. A(x) and x*x = 2", K::ExponentEnumeration},
      {"exists x. A(x) and x*x = 4", K::ExponentEnumeration},
      {"exists x. A(x) and x*x*x = 8", K::ExponentEnumeration},
      {"exists x. A(x) and x*x*x = 4", K::ExponentEnumeration},
      {"exists x. A(x) and not D[1](x)", K::ExponentEnumeration},
      {"exists x. D[2](x) and D[3](x) and 1 < x and x < 60", K::ExponentEnumeration},
      {"exists x. D[2](x) and D[3](x) and 1 < x and x < 70", K::ExponentEnumeration},
      {"exists x. D[3](2*x) and 1 < x and x < 8", K::ExponentEnumeration},
      {"exists x. D[3](2*x) and 1 < x and x < 4", K::ExponentEnumeration},
      {"exists x. A(x) and 1/3 < x and x < 1/2", K::ExponentEnumeration},
      {"exists x. A(x) and 1/5 < x and x < 1/3", K::ExponentEnumeration},
      {"exists x, y. A(x) and A(y) and x < y and y < 2*x", K::ExponentEnumeration},
      {"exists x, y. A(x) and A(y) and x + y = 3", K::ExponentEnumeration},
      {"exists x, y. A(x) and A(y) and x + y = 7", K::ExponentEnumeration},
      {"exists x, y. A(x) and A(y) and x*y = 8 and x < y", K::ExponentEnumeration},
      {"exists x, y. A(x) and A(y) and x - y = 5", K::ExponentEnumeration},
      {"exists x. A(x) and x*x - 5*x + 4 = 0", K::ExponentEnumeration},
      {"exists x. A(x) and x*x - 8*x + 15 = 0", K::ExponentEnumeration},
      {"exists x. A(x) and D[2](x) and x*x*x - 6*x*x + 8*x = 0", K::ExponentEnumeration},
      {"exists x. A(x) and D[3](x) and x*x - 6*x + 8 = 0", K::ExponentEnumeration},
      {"exists x. A(x) and 2*x*x - 9*x + 4 = 0", K::ExponentEnumeration},
      {"exists x. A(x) and 3*x*x - 10*x + 3 = 0", K::ExponentEnumeration},
      {"exists x. A(x) and L(3*x) = 2*x", K::ExponentEnumeration},
      {"exists x. A(x) and L(3*x) = 3*x", K::ExponentEnumeration},
      {"exists x. A(x) and L(x + 1) = 2", K::ExponentEnumeration},
      {"exists x. A(x) and L(x*x + 1) = 16 and x < 8", K::ExponentEnumeration},
      {"exists x. A(x) and 2 < x*x and x*x < 3", K::ExponentEnumeration},
      {"exists x. A(x) and D[2](x) and x > 1000", K::ExponentEnumeration},
      {"exists x. A(x) and D[5](x) and 2 < x and x < 30", K::ExponentEnumeration},
      {"exists x. A(x) and D[5](x) and 2 < x and x < 33", K::ExponentEnumeration},
      {"exists x. A(x) and not D[2](x) and not D[3](x) and 1 <= x and x <= 16", K::ExponentEnumeration},
      {"exists x. A(x) and not D[2](x) and not D[3](x) and 4 <= x and x <= 16", K::ExponentEnumeration},
      {"exists x. A(x) and x*x*x - 3*x < 0 and x > 1", K::ExponentEnumeration},
      {"exists x. A(x) and x*x*x - 3*x < 0 and x > 1/2", K::ExponentEnumeration},
      {"exists x. A(x) and x*x - 3*x + 1 < 0 and D[2](x)", K::ExponentEnumeration},
      {"exists x. A(x) and x*x - 3*x + 1 < 0 and D[2](2*x)", K::ExponentEnumeration},
      {"exists x. A(x) and x*x*x - 2 < 0 and 1 < x", K::ExponentEnumeration},
      {"forall x. A(x) -> D[2](x) or D[2](2*x)", K::ExponentEnumeration},
      {"forall x. A(x) -> D[3](x) or D[3](2*x)", K::ExponentEnumeration},
      {"forall x. A(x) -> L(x) = x", K::ExponentEnumeration},
      {"forall x. A(x) -> x*x - 3*x + 2 != 0", K::ExponentEnumeration},
      {"forall x. A(x) -> x*x - 3*x + 3 > 0", K::ExponentEnumeration},
      // witness search over the reals
      {"exists x. L(x) = 4 and x > 5", K::WitnessSearch},
      {"exists x. x*x = 4 and x < 0", K::WitnessSearch},
      {"exists x. D[2](x + 1) and x > 10", K::WitnessSearch},
      {"exists x. L(x/3) = 2 and D[2](L(x))", K::WitnessSearch},
      {"exists x. L(L(x) + 1) = 4 and x > 0", K::WitnessSearch},
      {"exists x. 2 < x and x < 3 and L(x*x) = 4", K::WitnessSearch},
      {"exists x. L(x) = 3", K::WitnessSearch},
      {"exists x. D[2](x) and 2 < x and x < 4", K::WitnessSearch},
      {"forall x. L(x) <= x", K::WitnessSearch},
      {"forall x. x > 0 -> L(x) <= x and x < 2*L(x)", K::WitnessSearch},
      {"forall x. D[2](x) -> A(x)", K::WitnessSearch},
      // root isolation
      {"exists w. w*w = 2", K::RootIsolation},
      {"exists w. w*w + 1 = 0", K::RootIsolation},
      {"exists w. w*w*w - 2*w + 5 = 0", K::RootIsolation},
      {"exists w. w*w - 2 = 0 and w < 1", K::RootIsolation},
      {"exists w. w*w - 2 = 0 and 0 < w and w < 1", K::RootIsolation},
      {"forall w. w*w - 2*w + 1 >= 0", K::RootIsolation},
      {"forall w. w*w*w >= w", K::RootIsolation},
      // sampled outer variable
      {"forall x. x > 0 -> exists y. A(y) and y <= x and x < 2*y", K::SampledOuter},
      {"forall x. x > 0 -> exists y. A(y) and y < x and x < 2*y", K::SampledOuter},
      {"forall x. x > 0 -> exists y. D[2](y) and y <= x and x < 4*y", K::SampledOuter},
  };
  std::vector<CorpusItem> out;
  for (const auto& [text, kind] : items) {
    CorpusItem it{text, parse_formula(text), kind, false};
    it.truth = derive_truth(it.sentence, kind);
    out.push_back(std::move(it));
  }
  return out;
}

std::vector<RcfInstance> rcf_corpus() {
  static const std::vector<std::pair<const char*, std::vector<std::string>>> items{
      {"exists x. x*x + b*x + c = 0", {"b", "c"}},
      {"exists x. a*x*x + b*x + c = 0", {"a", "b", "c"}},
      {"exists x. x*x + b*x + 1 = 0", {"b"}},
      {"exists x. x*x*x + p*x + q = 0", {"p", "q"}},
      {"exists x. x*x*x*x + a*x*x + b = 0", {"a", "b"}},
      {"forall x. x*x + b*x + c > 0", {"b", "c"}},
      {"forall x. a*x*x + b*x + c >= 0", {"a", "b", "c"}},
      {"exists x. x*x < a and x > b", {"a", "b"}},
      {"exists x. x*x = a and x < b", {"a", "b"}},
      {"exists x. a*x = b", {"a", "b"}},
      {"exists x. a*x + b = 0 and x > 0", {"a", "b"}},
      {"forall x. x > a -> x*x > a*a", {"a"}},
      {"exists x. x*x*x = a and x < 1", {"a"}},
      {"exists x. x*x*x*x = a", {"a"}},
      {"exists x. x*x - 2*a*x + b < 0", {"a", "b"}},
      {"exists x. (x - a)*(x - b) < 0", {"a", "b"}},
      {"exists x. (x - a)*(x - b) = 0 and x > 0", {"a", "b"}},
      {"exists x. x*x*x - 3*x + a = 0 and 0 < x and x < 2", {"a"}},
      {"exists x. x*x*x*x - a*x*x + 1 = 0", {"a"}},
      {"exists x. a*x*x*x + b*x = 0 and x != 0", {"a", "b"}},
      {"exists x. x*x + a*a < 1 and x > a", {"a"}},
      {"forall x. x*x*x*x + a*x + b >= 0", {"a", "b"}},
      {"forall x. exists y. y*y = x*x + a", {"a"}},
      {"exists x. forall y. y*y + x*y + a > 0", {"a"}},
      {"forall x. exists y. x > a -> y*y*y = x - b", {"a", "b"}},
      {"exists x. exists y. x*x + y*y < a", {"a"}},
      {"forall x. exists y. x*y = 1 or x = a", {"a"}},
      {"exists x. forall y. x*y*y + a >= 0", {"a"}},
      {"forall x. exists y. y > x*x + a", {"a"}},
      {"exists x. forall y. y*y - 2*x*y + a >= 0", {"a"}},
  };
  std::vector<RcfInstance> out;
  for (const auto& [text, params] : items) out.push_back({text, parse_formula(text), params});
  return out;
}

bool rcf_oracle(const Formula& sentence) {
  auto [pre, body] = split_prefix(sentence);
  if (pre.empty()) return decide_ground_sentence(body);
  auto inner = [&](const Formula& b, bool ex, const std::string& v) {
    Formula target = ex ? b : nnf(Formula::negation(b));
    bool found = exists_univariate(target, v);
    return ex ? found : !found;
  };
  if (pre.size() == 1) return inner(body, pre[0].first, pre[0].second);
  if (pre.size() != 2) throw ContractError("rcf_oracle: at most two quantifiers");
  bool ex = pre[0].first;
  for (const auto& v : rational_grid()) {
    Formula b = substitute(body, pre[0].second, Term::constant(v));
    if (inner(b, pre[1].first, pre[1].second) == ex) return ex;
  }
  return !ex;
}

}  // namespace pow2qe
