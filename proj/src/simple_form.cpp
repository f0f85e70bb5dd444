#include "pow2qe/simple_form.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "pow2qe/division_elim.hpp"
#include "pow2qe/errors.hpp"
#include "pow2qe/mutation.hpp"
#include "pow2qe/normal_form.hpp"

namespace pow2qe {

namespace {

const Term kZero = Term::constant(0);

enum class Sign { Zero, Pos, Neg, NonNeg, NonPos, Unknown };

// Sign facts visible from the shape of a polynomial alone.
Sign known_sign(const Poly& p) {
  if (p.is_zero()) return Sign::Zero;
  if (p.is_constant()) return sgn(p.constant_value()) > 0 ? Sign::Pos : Sign::Neg;
  if (!p.is_single_monomial()) return Sign::Unknown;
  const auto& [m, c] = *p.terms().begin();
  bool nonneg = std::all_of(m.begin(), m.end(), [](const auto& f) {
    return f.first.kind() == TermKind::Lambda || f.second % 2 == 0;
  });
  if (!nonneg) return Sign::Unknown;
  return sgn(c) > 0 ? Sign::NonNeg : Sign::NonPos;
}

bool maybe_positive(const Poly& p) {
  Sign s = known_sign(p);
  return s == Sign::Pos || s == Sign::NonNeg || s == Sign::Unknown;
}

bool maybe_negative(const Poly& p) {
  Sign s = known_sign(p);
  return s == Sign::Neg || s == Sign::NonPos || s == Sign::Unknown;
}

Term lambda_of_poly(const Poly& p) { return canon_term(Term::lambda(to_term(p))); }

Term mono(const Term& s, unsigned i, const std::string& x) {
  return canon_term(s * power(Term::var(x), i));
}

std::optional<unsigned> single_power(const PolyInX& p) {
  std::optional<unsigned> at;
  for (unsigned i = 0; i <= p.degree(); ++i) {
    if (p.coeff(i).is_zero()) continue;
    if (at) return std::nullopt;
    at = i;
  }
  return at;
}

}  // namespace

Formula lambda_window(const Term& u, const std::string& x, long n) {
  std::vector<Formula> ds;
  Term lu = Term::lambda(u);
  long last = mutated(Mutation::LambdaWindowDropLast) ? n - 1 : n;
  for (long k = 1; k <= last; ++k) ds.push_back(Formula::eq(Term::var(x), Term::pow2(k) * lu));
  return disj_all(ds);
}

Formula dn_shift_cover(const std::string& x, long n) {
  std::vector<Formula> ds;
  for (long j = 0; j < n; ++j) {
    if (mutated(Mutation::DnShiftCoverDropOne) && j == n - 1) continue;
    ds.push_back(dn_shift_atom(n, j, x));
  }
  return disj_all(ds);
}

std::vector<LambdaClause> lambda_poly_cases(const PolyInX& p, PolyMode mode, bool unit_factor) {
  if (unit_factor && mode != PolyMode::Equality)
    throw ContractError("lambda_poly_cases: unit factor needs equality mode");
  const long n = p.degree();
  const Term xt = Term::var(p.x);
  std::vector<LambdaClause> out;
  if (mode == PolyMode::Inequality) {
    Term lp = Term::lambda(p.to_term());
    for (unsigned i = 0; i <= p.degree(); ++i) {
      if (!maybe_positive(p.coeff(i))) continue;
      if (mutated(Mutation::LambdaPolyCasesDropTopDegree) && i == p.degree() && i > 0) continue;
      Term la = lambda_of_poly(p.coeff(i));
      // the dominant summand is within a factor 2^n of p from above, 1/2 from below
      for (long r = -1; r <= n; ++r) {
        LambdaClause c;
        c.first_form = true;
        c.i = i;
        c.r = r;
        c.value = canon_term(Term::pow2(r) * la);
        c.theta = Formula::eq(lp, mono(c.value, i, p.x));
        out.push_back(std::move(c));
      }
    }
  }
  for (unsigned i = 0; i <= p.degree(); ++i) {
    if (!maybe_positive(p.coeff(i))) continue;
    for (unsigned j = 0; j <= p.degree(); ++j) {
      if (i == j || !maybe_negative(p.coeff(j))) continue;
      Term la = lambda_of_poly(p.coeff(i));
      Term lb = lambda_of_poly(-p.coeff(j));
      // 2^-n < (a_i / -a_j) x^(i-j) <= 2^n, and rounding a quotient loses at most a factor 2;
      // a factor y^(i-j) with 1 <= y < 2 stretches the range by 2^|i-j| on one side
      bool up = i > j;
      unsigned e = up ? i - j : j - i;
      long slack = unit_factor ? static_cast<long>(e) : 0;
      long lo = up ? -n - slack : -n - std::max(slack - 1, 0L) - 1;
      long hi = up ? n + 1 : n;
      if (!unit_factor && (lo < -(n + 1) || hi > n + 1))
        throw ContractError("lambda_poly_cases: window exceeds the exponent bound");
      for (long r = lo; r <= hi; ++r) {
        LambdaClause c;
        c.first_form = false;
        c.i = i;
        c.j = j;
        c.e = e;
        c.r = r;
        c.value = up ? canon_term(Term::pow2(r) * lb / la) : canon_term(Term::pow2(r) * la / lb);
        c.theta = Formula::eq(power(xt, e), c.value);
        out.push_back(std::move(c));
      }
    }
  }
  long bound = 10 * (n + 2) * (n + 2) * (n + 2);
  if (!unit_factor && static_cast<long>(out.size()) >= bound)
    throw ContractError("lambda_poly_cases: case count exceeds the growth bound");
  return out;
}

namespace {

struct Candidate {
  Term s;
  unsigned i;
};

void collect_candidates(const PolyInX& p, unsigned depth_left, std::vector<Candidate>& out) {
  auto push = [&](const Term& s, unsigned i) {
    for (const auto& c : out)
      if (c.i == i && c.s == s) return;
    out.push_back({s, i});
  };
  if (p.is_zero()) return;
  if (auto i = single_power(p)) {
    push(lambda_of_poly(p.coeff(*i)), *i);
    return;
  }
  if (depth_left == 0) throw ContractError("lambda_poly_monomial: recursion deeper than the degree");
  for (const auto& c : lambda_poly_cases(p, PolyMode::Inequality)) {
    if (c.first_form) {
      push(c.value, c.i);
      continue;
    }
    // x^e := value lowers the degree below e
    Poly rv = canon_poly(c.value);
    Poly x = Poly::variable(p.x);
    Poly hat;
    for (unsigned k = 0; k <= p.degree(); ++k) {
      if (p.coeff(k).is_zero()) continue;
      hat += p.coeff(k) * x.pow(k % c.e) * rv.pow(k / c.e);
    }
    auto q = as_poly_in(hat, p.x);
    if (!q || q->degree() >= c.e) throw ContractError("lambda_poly_monomial: degree did not drop");
    collect_candidates(*q, depth_left - 1, out);
  }
}

}  // namespace

CaseSplit<Term> lambda_poly_monomial(const PolyInX& p) {
  std::vector<Candidate> cands;
  collect_candidates(p, p.degree(), cands);
  CaseSplit<Term> out;
  Term pt = p.to_term();
  for (const auto& [s, i] : cands) {
    Term sx = mono(s, i, p.x);
    Formula guard = Formula::truth();
    if (p.degree() > 0 && !single_power(p)) {
      guard = mk_and({Formula::pow2_pred(s), Formula::le(sx, pt),
                      Formula::lt(pt, canon_term(Term::constant(2) * sx))});
    }
    if (mutated(Mutation::LambdaPolyMonomialDouble)) sx = canon_term(Term::constant(2) * sx);
    out.push_back({guard, sx});
  }
  return out;
}

namespace {

// An innermost rounding application around x: its argument mentions x but
// has no rounding around x.
std::optional<Term> innermost_lambda(const Term& t, const std::string& x) {
  if (!t.has_lambda() || !t.mentions(x)) return std::nullopt;
  switch (t.kind()) {
    case TermKind::Lambda:
      if (auto inner = innermost_lambda(t.arg(), x)) return inner;
      return t;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
      if (auto l = innermost_lambda(t.lhs(), x)) return l;
      return innermost_lambda(t.rhs(), x);
    default:
      return std::nullopt;
  }
}

std::optional<Term> innermost_lambda(const Formula& f, const std::string& x) {
  std::optional<Term> found;
  for_each_term(f, [&](const Term& t) {
    if (!found) found = innermost_lambda(t, x);
  });
  return found;
}

void check(QeContext* ctx, const Formula& f, const char* where) {
  if (!ctx) return;
  ctx->check_size(f.size(), where);
  ctx->check_time();
}

}  // namespace

namespace {

// Squeezes atom by atom: the cases for one rounding only copy the atom that
// holds it, never the surrounding formula.
struct Squeezer {
  const std::string& x;
  QeContext* ctx;
  std::map<Formula, Formula> memo;

  Formula atom(const Formula& a) {
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    Formula cleared = clear_lambda_division(a, ctx);
    Formula out = cleared == a ? cleared_atom(a)
                               : simplify(map_atoms(cleared, [&](const Formula& b) { return cleared_atom(b); }));
    memo.emplace(a, out);
    return out;
  }

  Formula cleared_atom(const Formula& a) {
    auto l = innermost_lambda(a, x);
    if (!l) return a;
    Poly arg = canon_poly(l->arg());
    auto p = as_poly_in(arg, x);
    if (!p) throw ContractError("squeeze_lambda: rounding argument is not polynomial in " + x);
    Formula next;
    if (auto i = single_power(*p)) {
      next = simplify(replace_subterm(a, *l, mono(lambda_of_poly(p->coeff(*i)), *i, x)));
    } else {
      std::vector<Formula> ds;
      ds.push_back(mk_and({Formula::negation(Formula::lt(kZero, l->arg())),
                           simplify(replace_subterm(a, *l, kZero))}));
      for (const auto& c : lambda_poly_monomial(*p))
        ds.push_back(mk_and({simplify(c.guard), simplify(replace_subterm(a, *l, c.result))}));
      next = simplify(mk_or(ds));
    }
    check(ctx, next, "squeeze_lambda");
    return simplify(map_atoms(next, [&](const Formula& b) { return atom(b); }));
  }
};

}  // namespace

Formula squeeze_lambda(const Formula& f, const std::string& x, QeContext* ctx) {
  Squeezer sq{x, ctx, {}};
  Formula cur = simplify(map_atoms(simplify(f), [&](const Formula& a) { return sq.atom(a); }));
  check(ctx, cur, "squeeze_lambda");
  if (lambda_depth(x, cur) != 0) throw ContractError("squeeze_lambda: rounding around x survived");
  return cur;
}

Formula dn_monomial_split(const Term& s, unsigned i, long n, const std::string& x) {
  // with D_n(2^r x), x = 2^k and k = -r (mod n), so s x^i = s 2^(-r i) (mod n in the exponent)
  std::vector<Formula> ds;
  for (long r = 0; r < n; ++r) {
    long w = ((-r * static_cast<long>(i)) % n + n) % n;
    if (mutated(Mutation::DnMonomialSplitShiftW)) w = (w + 1) % n;
    Term ws = w == 0 ? s : Term::pow2(w) * s;
    ds.push_back(Formula::conj(dn_shift_atom(n, r, x), Formula::dvd(n, ws)));
  }
  return disj_all(ds);
}

Formula dn_poly_cases(const PolyInX& p, long n) {
  if (p.is_zero()) return Formula::falsity();
  if (auto i = single_power(p)) return Formula::dvd(n, mono(p.coeff_term(*i), *i, p.x));
  Term pt = p.to_term();
  std::vector<Formula> ds;
  for (const auto& c : lambda_poly_monomial(p))
    ds.push_back(Formula::conj(Formula::eq(pt, c.result), Formula::dvd(n, c.result)));
  return disj_all(ds);
}

namespace {

// D_n(p) with x plain in p, as a combination of x-free D atoms and D_n(2^r x).
Formula split_dn_atom(const Formula& a, const std::string& x) {
  const long n = a.modulus();
  auto p = as_poly_in(canon_poly(a.term()), x);
  if (!p) throw ContractError("make_simple: D_n argument is not polynomial in " + x);
  Formula cases = simplify(dn_poly_cases(*p, n));
  return map_atoms(cases, [&](const Formula& b) -> Formula {
    if (b.kind() != FormulaKind::Dvd || !b.term().mentions(x)) return b;
    auto q = as_poly_in(canon_poly(b.term()), x);
    auto i = q ? single_power(*q) : std::nullopt;
    if (!i) throw ContractError("make_simple: D_n case is not a monomial in " + x);
    return dn_monomial_split(q->coeff_term(*i), *i, b.modulus(), x);
  });
}

}  // namespace

Formula make_simple(const Formula& f, const std::string& x, QeContext* ctx) {
  if (f.has_quantifier()) throw ContractError("make_simple: quantified input");
  Formula cur = f.has_division() ? eliminate_division(f, ctx) : f;
  cur = squeeze_lambda(cur, x, ctx);
  cur = simplify(map_atoms(cur, [&](const Formula& a) -> Formula {
    if (a.kind() != FormulaKind::Dvd || !a.term().mentions(x)) return a;
    return split_dn_atom(a, x);
  }));
  check(ctx, cur, "make_simple");
  // coefficients may carry quotients of x-free terms; clearing them keeps x outside rounding
  if (cur.has_division()) cur = simplify(eliminate_division(cur, ctx));
  if (mutated(Mutation::MakeSimpleShiftR)) {
    cur = map_atoms(cur, [&](const Formula& a) -> Formula {
      if (a.kind() != FormulaKind::Dvd || a.modulus() == 1 || !a.term().mentions(x)) return a;
      return Formula::dvd(a.modulus(), canon_term(Term::constant(2) * a.term()));
    });
    cur = simplify(cur);
  }
  if (!is_simple_in(x, cur)) throw ContractError("make_simple: result is not simple in " + x);
  return cur;
}

}  // namespace pow2qe
