#include "pow2qe/division_elim.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "pow2qe/errors.hpp"
#include "pow2qe/mutation.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/poly.hpp"

namespace pow2qe {

namespace {

const Term kZero = Term::constant(0);
const Term kOne = Term::constant(1);

Formula pos(const Term& t) { return Formula::lt(kZero, t); }
Formula neg(const Term& t) { return Formula::lt(t, kZero); }

std::optional<Rational> numeral(const Term& t) {
  if (t.is_numeral()) return t.numeral_value();
  if (t.has_division()) return std::nullopt;
  Poly p = canon_poly(t);
  if (p.is_constant()) return p.constant_value();
  return std::nullopt;
}

Formula both(const Formula& a, const Formula& b) { return mk_and({a, b}); }

Term negate(const Term& t) {
  if (auto c = numeral(t)) return Term::constant(Rational(-*c));
  return canon_term(kZero - t);
}

// Power of two or a product of rounding values times one: 0 or a power of two.
bool pow2_valued(const Term& t) {
  Poly p = canon_poly(t);
  if (!p.is_single_monomial()) return false;
  const auto& [m, c] = *p.terms().begin();
  if (sgn(c) <= 0 || !exact_log2(c)) return false;
  return std::all_of(m.begin(), m.end(),
                     [](const auto& f) { return f.first.kind() == TermKind::Lambda; });
}

CaseSplit<Quotient> lambda_of_quotients(const CaseSplit<Quotient>& inner) {
  CaseSplit<Quotient> out;
  for (const auto& [g, q] : inner) {
    const Term& r = q.num;
    const Term& s = q.den;
    if (auto c = numeral(s)) {
      Term arg = *c == 1 ? r : canon_term(Term::constant(Rational(1 / *c)) * r);
      out.push_back({g, {canon_term(Term::lambda(arg)), kOne}});
      continue;
    }
    out.push_back({both(g, Formula::negation(pos(canon_term(r * s)))), {kZero, kOne}});
    auto add_signed = [&](const Formula& sign_guard, const Term& rr, const Term& ss) {
      for (const auto& c : rewrite_lambda_quotient(rr, ss))
        out.push_back({both(both(g, sign_guard), c.guard), {c.result.lhs(), c.result.rhs()}});
    };
    add_signed(both(pos(s), pos(r)), r, s);
    add_signed(both(neg(s), neg(r)), negate(r), negate(s));
  }
  return out;
}

}  // namespace

CaseSplit<Term> rewrite_lambda_quotient(const Term& x, const Term& y) {
  Term lx = Term::lambda(x), ly = Term::lambda(y);
  Formula small = Formula::lt(x * ly, y * lx);
  if (mutated(Mutation::RewriteQuotientSwap))
    return {{small, lx / ly}, {Formula::negation(small), lx / (Term::constant(2) * ly)}};
  return {{small, lx / (Term::constant(2) * ly)}, {Formula::negation(small), lx / ly}};
}

CaseSplit<Quotient> quotient_normal_form(const Term& t) {
  if (!t.has_division()) return {{Formula::truth(), {t, kOne}}};
  switch (t.kind()) {
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div: {
      auto as = quotient_normal_form(t.lhs());
      auto bs = quotient_normal_form(t.rhs());
      CaseSplit<Quotient> out;
      for (const auto& [ga, qa] : as) {
        for (const auto& [gb, qb] : bs) {
          Formula g = both(ga, gb);
          if (g.is_false()) continue;
          switch (t.kind()) {
            case TermKind::Add:
              out.push_back({g, {canon_term(qa.num * qb.den + qb.num * qa.den),
                                 canon_term(qa.den * qb.den)}});
              break;
            case TermKind::Sub:
              out.push_back({g, {canon_term(qa.num * qb.den - qb.num * qa.den),
                                 canon_term(qa.den * qb.den)}});
              break;
            case TermKind::Mul:
              out.push_back({g, {canon_term(qa.num * qb.num), canon_term(qa.den * qb.den)}});
              break;
            default: {
              // (ra/sa) / (rb/sb), with x / 0 = 0
              auto c = numeral(qb.num);
              if (c && sgn(*c) == 0) {
                out.push_back({g, {kZero, kOne}});
              } else if (c) {
                out.push_back({g, {canon_term(qa.num * qb.den), canon_term(qa.den * qb.num)}});
              } else {
                Formula nz = Formula::ne(qb.num, kZero);
                out.push_back({both(g, nz), {canon_term(qa.num * qb.den),
                                             canon_term(qa.den * qb.num)}});
                out.push_back({both(g, Formula::negation(nz)), {kZero, kOne}});
              }
            }
          }
        }
      }
      return out;
    }
    case TermKind::Lambda: {
      auto out = lambda_of_quotients(quotient_normal_form(t.arg()));
      if (mutated(Mutation::QuotientNormalFormDropLast) && out.size() > 1) out.pop_back();
      return out;
    }
    default:
      return {{Formula::truth(), {t, kOne}}};
  }
}

namespace {

void collect_lambdas(const Term& t, std::vector<Term>& out) {
  if (!t.has_lambda()) return;
  switch (t.kind()) {
    case TermKind::Lambda:
      collect_lambdas(t.arg(), out);
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      return;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
      collect_lambdas(t.lhs(), out);
      collect_lambdas(t.rhs(), out);
      return;
    default:
      return;
  }
}

struct DivMeasure {
  std::size_t depth = 0;
  std::size_t count = 0;
  bool operator<(const DivMeasure& o) const {
    return depth != o.depth ? depth < o.depth : count < o.count;
  }
};

DivMeasure div_measure(const Formula& f, std::vector<Term>* maximal) {
  std::vector<Term> ls;
  for_each_term(f, [&](const Term& t) { collect_lambdas(t, ls); });
  DivMeasure m;
  for (const auto& l : ls) {
    std::size_t d = div_lambda_depth(l);
    if (d > m.depth) {
      m = {d, 0};
      if (maximal) maximal->clear();
    }
    if (d == m.depth && d > 0) {
      ++m.count;
      if (maximal) maximal->push_back(l);
    }
  }
  return m;
}

}  // namespace

namespace {

// Clears one atom at a time so the case splits of one rounding do not copy
// the rest of the formula.
Formula clear_atom(const Formula& atom, QeContext* ctx) {
  Formula cur = atom;
  for (;;) {
    std::vector<Term> maximal;
    DivMeasure before = div_measure(cur, &maximal);
    if (before.depth == 0) return cur;
    std::vector<Term> inner;
    collect_lambdas(maximal.front(), inner);
    for (const auto& l : inner) {
      if (!l.arg().has_division() || div_lambda_depth(l.arg()) != 0) continue;
      std::vector<Formula> ds;
      for (const auto& [g, q] : quotient_normal_form(l)) {
        Term by = q.den == kOne ? q.num : q.as_term();
        ds.push_back(mk_and({g, replace_subterm(cur, l, by)}));
      }
      cur = mk_or(ds);
      if (ctx) {
        ctx->check_size(cur.size(), "clear_lambda_division");
        ctx->check_time();
      }
    }
    DivMeasure after = div_measure(cur, nullptr);
    if (!(after < before)) throw ContractError("clear_lambda_division: measure did not decrease");
    cur = simplify(cur);
  }
}

}  // namespace

Formula clear_lambda_division(const Formula& f, QeContext* ctx) {
  if (div_measure(f, nullptr).depth == 0) return f;
  return simplify(map_atoms(f, [&](const Formula& a) { return clear_atom(a, ctx); }));
}

Formula dn_of_quotient(long n, const Term& x, const Term& y) {
  std::vector<Formula> ds;
  for (long i = mutated(Mutation::DnOfQuotientSkipZero) ? 1 : 0; i < n; ++i) {
    Term s = Term::pow2(i);
    Term sx = i == 0 ? x : s * x;
    Term sy = i == 0 ? y : s * y;
    ds.push_back(Formula::conj(Formula::dvd(n, sx), Formula::dvd(n, sy)));
  }
  return disj_all(ds);
}

namespace {

// 0 < r/s for division-free r and nonzero s.
Formula positive_quotient(const Term& r, const Term& s) {
  if (auto c = numeral(s)) return sgn(*c) > 0 ? pos(r) : neg(r);
  return mk_or({both(pos(s), pos(r)), both(neg(s), neg(r))});
}

// D_n(r/s) for positive r and s.
Formula dn_positive_quotient(long n, const Term& r, const Term& s) {
  std::vector<Formula> ds;
  for (const auto& c : rewrite_lambda_quotient(r, s)) {
    const Term& num = c.result.lhs();
    const Term& den = c.result.rhs();
    // lambda(r/s) = r/s, cleared of its positive denominators
    Formula exact = Formula::eq(num * s, r * den);
    ds.push_back(mk_and({c.guard, exact, dn_of_quotient(n, num, den)}));
  }
  return mk_or(ds);
}

Formula dn_quotient(long n, const Term& r, const Term& s) {
  if (auto c = numeral(s)) {
    if (*c == 1) return Formula::dvd(n, r);
    return Formula::dvd(n, canon_term(Term::constant(Rational(1 / *c)) * r));
  }
  if (pow2_valued(r) && pow2_valued(s)) return mk_and({pos(r), pos(s), dn_of_quotient(n, r, s)});
  // a nonpositive quotient is never a power of two
  return mk_or({mk_and({pos(s), pos(r), dn_positive_quotient(n, r, s)}),
                mk_and({neg(s), neg(r), dn_positive_quotient(n, negate(r), negate(s))})});
}

}  // namespace

Formula eliminate_division(const Formula& f, QeContext* ctx) {
  Formula cleared = clear_lambda_division(f, ctx);
  Formula out = map_atoms(cleared, [&](const Formula& a) -> Formula {
    std::vector<Formula> ds;
    switch (a.kind()) {
      case FormulaKind::Eq:
        if (!a.lhs().has_division() && !a.rhs().has_division()) return a;
        for (const auto& [g, q] : quotient_normal_form(a.lhs() - a.rhs()))
          ds.push_back(both(g, Formula::eq(q.num, kZero)));
        break;
      case FormulaKind::Lt:
        if (!a.lhs().has_division() && !a.rhs().has_division()) return a;
        for (const auto& [g, q] : quotient_normal_form(a.rhs() - a.lhs()))
          ds.push_back(both(g, positive_quotient(q.num, q.den)));
        break;
      case FormulaKind::Dvd:
        if (!a.term().has_division()) return a;
        for (const auto& [g, q] : quotient_normal_form(a.term()))
          ds.push_back(both(g, dn_quotient(a.modulus(), q.num, q.den)));
        break;
      default:
        return a;
    }
    return mk_or(ds);
  });
  if (out.has_division()) throw ContractError("eliminate_division: quotient survived");
  if (ctx) ctx->check_size(out.size(), "eliminate_division");
  return out;
}

}  // namespace pow2qe
