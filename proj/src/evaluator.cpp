#include "pow2qe/evaluator.hpp"

#include <algorithm>
#include <set>

#include "pow2qe/errors.hpp"
#include "pow2qe/poly.hpp"
#include "pow2qe/univariate.hpp"

namespace pow2qe {

Rational eval_term(const Term& t, const Assignment& s) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = s.find(t.name());
      if (it == s.end()) throw ContractError("unassigned variable " + t.name());
      return it->second;
    }
    case TermKind::Const:
    case TermKind::Pow2:
      return t.numeral_value();
    case TermKind::Add:
      return eval_term(t.lhs(), s) + eval_term(t.rhs(), s);
    case TermKind::Sub:
      return eval_term(t.lhs(), s) - eval_term(t.rhs(), s);
    case TermKind::Mul: {
      Rational a = eval_term(t.lhs(), s);
      if (sgn(a) == 0) return a;
      return a * eval_term(t.rhs(), s);
    }
    case TermKind::Div: {
      Rational b = eval_term(t.rhs(), s);
      if (sgn(b) == 0) return Rational(0);
      return eval_term(t.lhs(), s) / b;
    }
    case TermKind::Lambda:
      return lambda_of(eval_term(t.arg(), s));
  }
  throw ContractError("eval_term: unknown term kind");
}

bool dn_holds(long n, const Rational& v) {
  if (sgn(v) <= 0) return false;
  auto k = exact_log2(v);
  return k && *k % n == 0;
}

bool eval_qf(const Formula& f, const Assignment& s) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Eq:
      return eval_term(f.lhs(), s) == eval_term(f.rhs(), s);
    case FormulaKind::Lt:
      return eval_term(f.lhs(), s) < eval_term(f.rhs(), s);
    case FormulaKind::Dvd:
      return dn_holds(f.modulus(), eval_term(f.term(), s));
    case FormulaKind::Not:
      return !eval_qf(f.sub(), s);
    case FormulaKind::And:
      return eval_qf(f.left(), s) && eval_qf(f.right(), s);
    case FormulaKind::Or:
      return eval_qf(f.left(), s) || eval_qf(f.right(), s);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      throw ContractError("eval_qf on a quantified formula");
  }
  return false;
}

bool decide_ground_sentence(const Formula& f) {
  if (!free_vars(f).empty()) throw ContractError("decide_ground_sentence: free variables");
  return eval_qf(f, {});
}

namespace {

// Real roots of the polynomial atoms in x once the other variables are fixed.
std::vector<Rational> root_candidates(const Formula& f, const std::string& x,
                                      const Assignment& s) {
  std::vector<Rational> out;
  std::set<std::string> others;
  for (const auto& v : free_vars(f))
    if (v != x) others.insert(v);
  auto consider = [&](const Term& a, const Term& b) {
    Term d = a - b;
    for (const auto& v : others) {
      auto it = s.find(v);
      if (it != s.end()) d = substitute(d, v, Term::constant(it->second));
    }
    Poly p = canon_poly(d);
    auto u = to_upoly(p, x);
    if (!u || u->size() <= 1) return;
    UPoly sf = squarefree(*u);
    for (auto r : isolate_roots(sf)) {
      if (!r.exact()) {
        for (int i = 0; i < 24 && !r.exact(); ++i) refine(sf, r);
      }
      out.push_back(r.lo);
      if (!r.exact()) out.push_back(r.hi);
    }
  };
  for_each_atom(f, [&](const Formula& a) {
    if (a.kind() == FormulaKind::Eq || a.kind() == FormulaKind::Lt) consider(a.lhs(), a.rhs());
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::optional<Rational> witness_search(const Formula& f, const std::string& x,
                                       const Assignment& s, const WitnessBudget& budget) {
  Assignment a = s;
  std::size_t evals = 0;
  auto test = [&](const Rational& v) {
    ++evals;
    a[x] = v;
    return eval_qf(f, a);
  };
  if (test(Rational(0))) return Rational(0);

  auto roots = root_candidates(f, x, s);
  std::vector<Rational> pts = roots;
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) pts.push_back((roots[i] + roots[i + 1]) / 2);
  if (!roots.empty()) {
    pts.push_back(roots.front() - 1);
    pts.push_back(roots.back() + 1);
  }
  for (const auto& v : pts)
    if (test(v)) return v;

  for (long m = 1; m <= budget.max_mantissa; m += 2) {
    for (long k = budget.min_exponent; k <= budget.max_exponent; ++k) {
      if (evals >= budget.max_evaluations) return std::nullopt;
      Rational v = pow2(k) * m;
      if (test(v)) return v;
      if (test(-v)) return Rational(-v);
    }
  }
  return std::nullopt;
}

}  // namespace pow2qe
