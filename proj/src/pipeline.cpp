#include "pow2qe/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "pow2qe/division_elim.hpp"
#include "pow2qe/errors.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/exponent_arith.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/poly.hpp"
#include "pow2qe/rcf.hpp"
#include "pow2qe/simple_form.hpp"

namespace pow2qe {

namespace {

const Term kZero = Term::constant(0);
const Term kOne = Term::constant(1);
const Term kTwo = Term::constant(2);

Formula pos(const Term& t) { return Formula::lt(kZero, t); }

Formula exists_all(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::exists(*it, std::move(body));
  return body;
}

// Peels a leading block of existential quantifiers.
std::pair<std::vector<std::string>, Formula> open_block(const Formula& f) {
  std::vector<std::string> vars;
  Formula cur = f;
  while (cur.kind() == FormulaKind::Exists) {
    vars.push_back(cur.var());
    cur = cur.sub();
  }
  if (cur.has_quantifier()) throw ContractError("expected an existential block over a quantifier-free body");
  return {vars, cur};
}

bool mentions_any(const Term& t, const std::set<std::string>& vs) {
  return std::any_of(vs.begin(), vs.end(), [&](const std::string& v) { return t.mentions(v); });
}

bool mentions_any(const Formula& f, const std::set<std::string>& vs) {
  return std::any_of(vs.begin(), vs.end(), [&](const std::string& v) { return f.mentions(v); });
}

std::optional<Term> innermost_lambda(const Term& t, const std::set<std::string>& vs) {
  if (!t.has_lambda() || !mentions_any(t, vs)) return std::nullopt;
  switch (t.kind()) {
    case TermKind::Lambda:
      if (auto inner = innermost_lambda(t.arg(), vs)) return inner;
      return t;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
      if (auto l = innermost_lambda(t.lhs(), vs)) return l;
      return innermost_lambda(t.rhs(), vs);
    default:
      return std::nullopt;
  }
}

std::optional<Term> innermost_lambda(const Formula& f, const std::set<std::string>& vs) {
  std::optional<Term> found;
  for_each_term(f, [&](const Term& t) {
    if (!found) found = innermost_lambda(t, vs);
  });
  return found;
}

void record(QeContext& ctx, const std::string& phase, const Formula& f) {
  GrowthIteration it;
  it.phase = phase;
  it.length_dn_weighted = formula_length(f, true);
  it.length_symbols = formula_length(f, false);
  it.rcf_calls = ctx.rcf_calls();
  it.millis = ctx.elapsed_millis();
  ctx.report().iterations.push_back(std::move(it));
}

void guard(QeContext& ctx, const Formula& f, const char* where) {
  ctx.check_size(f.size(), where);
  ctx.check_time();
}

// Runs `fn` with the caller's context or a fresh one.
template <class Fn>
auto with_context(QeContext* ctx, Fn fn) {
  if (ctx) return fn(*ctx);
  QeContext local;
  return fn(local);
}

bool in_dn_atom(const Formula& f, const std::string& v) {
  bool found = false;
  for_each_atom(f, [&](const Formula& a) {
    if (a.kind() == FormulaKind::Dvd && a.term().mentions(v)) found = true;
  });
  return found;
}

// exists v (c v + t = 0 and phi) is phi[v := -t/c]. A variable under D_n is
// only solved for a parameter term so no new bound D_n argument appears.
void solve_linear_conjuncts(ExistentialForm& b) {
  for (bool changed = true; changed;) {
    changed = false;
    std::set<std::string> bound(b.vars.begin(), b.vars.end());
    for (const auto& c : conjuncts(b.body)) {
      if (c.kind() != FormulaKind::Eq) continue;
      Poly p = canon_poly(c.lhs() - c.rhs());
      for (const auto& v : b.vars) {
        if (p.degree(v) != 1 || p.mentions_opaquely(v)) continue;
        Poly a = p.coeff(v, 1);
        if (!a.is_constant()) continue;
        Term t = to_term(p.coeff(v, 0) * Rational(-1 / a.constant_value()));
        if (in_dn_atom(b.body, v) && mentions_any(t, bound)) continue;
        std::string name = v;
        b.body = simplify(substitute(b.body, name, t));
        std::erase(b.vars, name);
        std::erase(b.pow2_vars, name);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Rounding and D_n out of the quantified positions

Formula ExistentialForm::to_formula() const { return exists_all(vars, body); }

std::vector<ExistentialForm> lambda_free_branches(const std::vector<std::string>& vars,
                                                  const Formula& body, QeContext* ctx_in) {
  return with_context(ctx_in, [&](QeContext& ctx) {
    std::set<std::string> bound(vars.begin(), vars.end());
    ExistentialForm start{vars, {}, simplify(body)};
    // D_n(t) becomes exists z (z = t and D_n(z)) unless t is 2^r v
    for (;;) {
      std::optional<Term> target;
      for_each_atom(start.body, [&](const Formula& a) {
        if (target || a.kind() != FormulaKind::Dvd || !mentions_any(a.term(), bound)) return;
        for (const auto& v : bound)
          if (shift_of(a.term(), v)) return;
        target = a.term();
      });
      if (!target) break;
      std::string z = ctx.fresh("z");
      start.vars.push_back(z);
      bound.insert(z);
      Formula renamed = map_atoms(start.body, [&](const Formula& a) {
        if (a.kind() == FormulaKind::Dvd && a.term() == *target)
          return Formula::dvd(a.modulus(), Term::var(z));
        return a;
      });
      start.body = mk_and({Formula::eq(Term::var(z), *target), renamed});
    }
    // psi(L(t)) becomes (t <= 0 and psi(0)) or exists z (A(z) and z <= t < 2z and psi(z))
    std::vector<ExistentialForm> work{start}, done;
    while (!work.empty()) {
      ExistentialForm b = std::move(work.back());
      work.pop_back();
      std::set<std::string> bs(b.vars.begin(), b.vars.end());
      auto l = innermost_lambda(b.body, bs);
      if (!l) {
        done.push_back(std::move(b));
        continue;
      }
      const Term& t = l->arg();
      ExistentialForm b1 = b;
      std::string z = ctx.fresh("z");
      Term zt = Term::var(z);
      b1.vars.push_back(z);
      b1.pow2_vars.push_back(z);
      b1.body = simplify(mk_and({Formula::pow2_pred(zt), Formula::le(zt, t), Formula::lt(t, kTwo * zt),
                                 replace_subterm(b.body, *l, zt)}));
      b.body = simplify(mk_and({Formula::le(t, kZero), replace_subterm(b.body, *l, kZero)}));
      guard(ctx, b1.body, "lambda_free_branches");
      if (!b1.body.is_false()) work.push_back(std::move(b1));
      if (!b.body.is_false()) work.push_back(std::move(b));
    }
    std::reverse(done.begin(), done.end());
    for (auto& b : done) solve_linear_conjuncts(b);
    return done;
  });
}

Formula eliminate_lambda_from_existential(const Formula& block, QeContext* ctx) {
  auto [vars, body] = open_block(block);
  std::vector<Formula> ds;
  for (const auto& b : lambda_free_branches(vars, body, ctx)) ds.push_back(b.to_formula());
  return disj_all(ds);
}

// ---------------------------------------------------------------------------
// Step 1: quantifiers over powers of two

Formula PowerPrefixForm::to_formula() const {
  std::vector<Formula> cs;
  for (const auto& v : vars) cs.push_back(Formula::pow2_pred(Term::var(v)));
  cs.push_back(body);
  return exists_all(vars, conj_all(cs));
}

namespace {

Formula kill_dn(const Formula& f, const std::string& v) {
  return map_atoms(f, [&](const Formula& a) {
    if (a.kind() == FormulaKind::Dvd && a.term().mentions(v)) return Formula::falsity();
    return a;
  });
}

}  // namespace

std::vector<PowerPrefixForm> power_prefix_branches(const std::vector<std::string>& vars,
                                                   const Formula& psi, QeContext* ctx_in) {
  return with_context(ctx_in, [&](QeContext& ctx) {
    std::vector<PowerPrefixForm> out;
    for (const auto& b : lambda_free_branches(vars, psi, &ctx)) {
      std::set<std::string> pow2(b.pow2_vars.begin(), b.pow2_vars.end());
      for (const auto& c : conjuncts(b.body)) {
        if (c.kind() == FormulaKind::Dvd && c.modulus() == 1 && c.term().is_var())
          pow2.insert(c.term().name());
      }
      std::vector<std::string> fixed, split, plain;
      for (const auto& v : b.vars) {
        if (pow2.count(v)) fixed.push_back(v);
        else if (in_dn_atom(b.body, v)) split.push_back(v);
        else plain.push_back(v);
      }
      // x = 0, x = y, x = y z, x = -y, x = -y z with A(y) and 1 < z < 2;
      // D_n(y z) and D_n(-y ...) are false
      std::function<void(std::size_t, Formula, std::vector<std::string>, std::vector<std::string>)> go =
          [&](std::size_t k, Formula body, std::vector<std::string> ys, std::vector<std::string> zs) {
            if (body.is_false()) return;
            if (k == split.size()) {
              std::vector<std::string> reals = plain;
              reals.insert(reals.end(), zs.begin(), zs.end());
              std::vector<Formula> cs;
              for (const auto& z : zs) {
                cs.push_back(Formula::lt(kOne, Term::var(z)));
                cs.push_back(Formula::lt(Term::var(z), kTwo));
              }
              cs.push_back(body);
              Formula phi = reals.empty() ? simplify(body)
                                          : qe_rcf_with_params(exists_all(reals, conj_all(cs)), &ctx);
              guard(ctx, phi, "step1");
              if (!phi.is_false()) out.push_back({ys, phi});
              return;
            }
            const std::string& v = split[k];
            Term vt = Term::var(v);
            auto with = [&](std::vector<std::string> l, const std::string& n) {
              l.push_back(n);
              return l;
            };
            go(k + 1, simplify(substitute(body, v, kZero)), ys, zs);
            go(k + 1, body, with(ys, v), zs);
            go(k + 1, simplify(substitute(kill_dn(body, v), v, kZero - vt)), with(ys, v), zs);
            std::string z = ctx.fresh("f");
            Term yz = vt * Term::var(z);
            go(k + 1, simplify(substitute(kill_dn(body, v), v, yz)), with(ys, v), with(zs, z));
            go(k + 1, simplify(substitute(kill_dn(body, v), v, kZero - yz)), with(ys, v), with(zs, z));
          };
      go(0, b.body, fixed, {});
    }
    return out;
  });
}

Formula step1_to_A_prefix(const Formula& block, QeContext* ctx) {
  auto [vars, body] = open_block(block);
  std::vector<Formula> ds;
  for (const auto& b : power_prefix_branches(vars, body, ctx)) ds.push_back(b.to_formula());
  return disj_all(ds);
}

// ---------------------------------------------------------------------------
// Step 2: one quantifier over powers of two

namespace {

struct XClause {
  std::vector<Poly> eqs;     // p(x) = 0
  std::vector<Poly> pos;     // q(x) > 0
  std::vector<Formula> dns;  // D_n(2^s x) and negations
};

// D_n(2^(s + shift) x) where x^e = v and x > 0.
Formula dn_through_power(const Formula& lit, const std::string& x, unsigned e, const Term& v,
                         long shift) {
  bool negated = lit.kind() == FormulaKind::Not;
  const Formula& a = negated ? lit.sub() : lit;
  long s = *shift_of(a.term(), x) + shift;
  long n = a.modulus() * static_cast<long>(e);
  Formula out = Formula::dvd(n, canon_term(Term::pow2(s * static_cast<long>(e)) * v));
  return negated ? Formula::negation(out) : out;
}

Formula conj_positive(const std::vector<Poly>& ps, const std::function<Term(const Poly&)>& at) {
  std::vector<Formula> cs;
  for (const auto& p : ps) cs.push_back(pos(at(p)));
  return conj_all(cs);
}

std::vector<LambdaClause> distinct_values(std::vector<LambdaClause> cs) {
  std::vector<LambdaClause> out;
  for (auto& c : cs) {
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const LambdaClause& o) { return o.e == c.e && o.value == c.value; });
    if (!seen) out.push_back(std::move(c));
  }
  return out;
}

Formula eliminate_clause(const std::string& x, const XClause& cl, QeContext& ctx);

// The positive root of x^e = v when it is v itself or a numeral 2^(k/e).
// Callers keep 0 < x, so e = 1 only drops the equation.
std::optional<Term> numeral_root(const Term& v, long e) {
  if (e == 1) return v;
  Poly p = canon_poly(v);
  if (!p.is_constant() || sgn(p.constant_value()) <= 0) return std::nullopt;
  auto k = exact_log2(p.constant_value());
  if (!k || *k % e != 0) return std::nullopt;
  return Term::pow2(*k / e);
}

Formula equality_branch(const std::string& x, const XClause& cl, QeContext& ctx) {
  const Poly& p = cl.eqs.front();
  PolyInX px = *as_poly_in(p, x);
  Term xt = Term::var(x);
  std::vector<Formula> ds;
  // p vanishing identically leaves the other conjuncts
  bool can_vanish = std::none_of(px.coeffs.begin(), px.coeffs.end(),
                                 [](const Poly& c) { return c.is_constant() && !c.is_zero(); });
  if (can_vanish) {
    std::vector<Formula> zero;
    for (const auto& c : px.coeffs) zero.push_back(Formula::eq(to_term(c), kZero));
    XClause rest = cl;
    rest.eqs.erase(rest.eqs.begin());
    Formula z = simplify(mk_and(zero));
    if (!z.is_false()) ds.push_back(mk_and({z, eliminate_clause(x, rest, ctx)}));
  }
  for (const auto& c : distinct_values(lambda_poly_cases(px, PolyMode::Equality))) {
    // x^e = v: A(x) iff D_e(v), and D_n(2^s x) iff D_ne(2^se v)
    std::vector<Formula> theta{Formula::dvd(c.e, c.value)};
    for (const auto& lit : cl.dns) theta.push_back(dn_through_power(lit, x, c.e, c.value, 0));
    Formula th = simplify(mk_and(theta));
    if (th.is_false()) continue;
    std::vector<Formula> field{pos(xt), Formula::eq(power(xt, c.e), c.value)};
    for (const auto& q : cl.eqs) field.push_back(Formula::eq(to_term(q), kZero));
    for (const auto& q : cl.pos) field.push_back(pos(to_term(q)));
    if (auto root = numeral_root(c.value, c.e)) {
      ds.push_back(mk_and({th, simplify(substitute(conj_all(field), x, *root))}));
      continue;
    }
    ds.push_back(mk_and({th, qe_rcf_with_params(Formula::exists(x, conj_all(field)), &ctx)}));
    guard(ctx, ds.back(), "step2 equality branch");
  }
  return simplify(mk_or(ds));
}

Formula inequality_branch(const std::string& x, const XClause& cl, QeContext& ctx) {
  std::vector<Formula> th = cl.dns;
  th.push_back(Formula::pow2_pred(Term::var(x)));
  ThetaDecision dec = decide_exists_theta(ExponentConstraint(x, conj_all(th)));
  if (!dec.sat) return Formula::falsity();
  if (cl.pos.empty()) return Formula::truth();
  const long m = dec.period;
  Term xt = Term::var(x);
  std::vector<Formula> ds;

  // a whole interval [u, 2^M u] on which every q_i is positive
  std::string u = ctx.fresh("u");
  Term ut = Term::var(u);
  Formula inside = Formula::conj(Formula::le(ut, xt), Formula::le(xt, Term::pow2(m) * ut));
  Formula all_pos = conj_positive(cl.pos, [](const Poly& q) { return to_term(q); });
  Formula large = Formula::exists(
      u, Formula::conj(pos(ut), Formula::forall(x, Formula::implies(inside, all_pos))));
  ds.push_back(qe_rcf_with_params(large, &ctx));
  if (ds.back().is_true()) return ds.back();

  // a root u = u1 u2 of some q_j, A(u1), 1 <= u2 < 2, and the witness 2^r u1 with 1 <= r <= M
  std::string u1 = ctx.fresh("u"), u2 = ctx.fresh("u");
  Term u1t = Term::var(u1), u2t = Term::var(u2);
  Poly u1p = Poly::variable(u1), u1u2 = Poly::variable(u1) * Poly::variable(u2);
  for (const auto& qj : cl.pos) {
    PolyInX pu = *as_poly_in(qj.substitute(x, u1p), u1);
    Term root = to_term(qj.substitute(x, u1u2));
    for (const auto& c : distinct_values(lambda_poly_cases(pu, PolyMode::Equality, true))) {
      Formula base = Formula::dvd(c.e, c.value);
      for (long r = 1; r <= m; ++r) {
        std::vector<Formula> theta{base};
        for (const auto& lit : cl.dns) theta.push_back(dn_through_power(lit, x, c.e, c.value, r));
        Formula thr = simplify(mk_and(theta));
        if (thr.is_false()) continue;
        Poly shifted = Poly(pow2(r)) * u1p;
        std::vector<Formula> field{pos(u1t), Formula::eq(power(u1t, c.e), c.value),
                                   Formula::le(kOne, u2t), Formula::lt(u2t, kTwo),
                                   Formula::eq(root, kZero)};
        field.push_back(
            conj_positive(cl.pos, [&](const Poly& q) { return to_term(q.substitute(x, shifted)); }));
        Formula ex = Formula::exists(u1, Formula::exists(u2, conj_all(field)));
        if (auto root = numeral_root(c.value, c.e))
          ex = Formula::exists(u2, simplify(substitute(conj_all(field), u1, *root)));
        ds.push_back(mk_and({thr, qe_rcf_with_params(ex, &ctx)}));
        guard(ctx, ds.back(), "step2 trapped root");
      }
    }
  }
  return simplify(mk_or(ds));
}

Formula eliminate_clause(const std::string& x, const XClause& cl, QeContext& ctx) {
  ctx.check_time();
  if (!cl.eqs.empty()) return equality_branch(x, cl, ctx);
  return inequality_branch(x, cl, ctx);
}

}  // namespace

Formula step2_eliminate_A(const std::string& x, const Formula& phi, QeContext* ctx_in) {
  return with_context(ctx_in, [&](QeContext& ctx) {
    Formula f = simplify(phi);
    if (f.has_quantifier()) throw ContractError("step2_eliminate_A: quantified body");
    if (!f.mentions(x)) return f;
    Formula simple = make_simple(f, x, &ctx);
    Formula norm = normalize_atoms(simple, x);
    auto clauses = dnf_clauses(norm, [&](const Formula& g) { return !g.mentions(x); },
                               ctx.limits().max_size);
    std::map<Formula, Formula> memo;
    std::vector<Formula> out;
    for (const auto& clause : clauses) {
      std::vector<Formula> rest, xs;
      XClause cl;
      for (const auto& lit : clause) {
        if (!lit.mentions(x)) {
          rest.push_back(lit);
          continue;
        }
        xs.push_back(lit);
        switch (lit.kind()) {
          case FormulaKind::Eq:
            cl.eqs.push_back(canon_poly(lit.lhs() - lit.rhs()));
            break;
          case FormulaKind::Lt:
            cl.pos.push_back(canon_poly(lit.rhs() - lit.lhs()));
            break;
          default:
            cl.dns.push_back(lit);
        }
      }
      Formula key = conj_all(xs);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, eliminate_clause(x, cl, ctx)).first;
      rest.push_back(it->second);
      out.push_back(mk_and(rest));
      if (out.back().is_true()) break;
      guard(ctx, out.back(), "step2");
    }
    Formula res = simplify(mk_or(out));
    if (res.has_division()) res = simplify(eliminate_division(res, &ctx));
    return prune_by_signs(res);
  });
}

// ---------------------------------------------------------------------------
// Blocks and whole formulas

Formula eliminate_block(const std::vector<std::string>& vars, const Formula& psi,
                        QeContext* ctx_in) {
  return with_context(ctx_in, [&](QeContext& ctx) {
    if (psi.has_quantifier()) throw ContractError("eliminate_block: quantified body");
    Formula body = simplify(psi.has_division() ? eliminate_division(psi, &ctx) : psi);
    std::set<std::string> vs(vars.begin(), vars.end());
    if (!mentions_any(body, vs)) return body;
    auto forms = power_prefix_branches(vars, body, &ctx);
    std::vector<Formula> out;
    for (const auto& form : forms) {
      Formula cur = form.body;
      record(ctx, "step1", cur);
      for (auto it = form.vars.rbegin(); it != form.vars.rend(); ++it) {
        cur = step2_eliminate_A(*it, cur, &ctx);
        record(ctx, "eliminate_A", cur);
      }
      out.push_back(cur);
      if (cur.is_true()) break;
    }
    return simplify(mk_or(out));
  });
}

Formula eliminate_block(const Formula& block, QeContext* ctx) {
  auto [vars, body] = open_block(block);
  return eliminate_block(vars, body, ctx);
}

Formula Prenex::to_formula() const {
  Formula out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->first ? Formula::exists(it->second, out) : Formula::forall(it->second, out);
  return out;
}

Prenex prenex(const Formula& f, QeContext* ctx_in) {
  return with_context(ctx_in, [&](QeContext& ctx) {
    std::function<Prenex(const Formula&)> go = [&](const Formula& g) -> Prenex {
      switch (g.kind()) {
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
          std::string v = ctx.fresh(g.var());
          Prenex inner = go(substitute(g.sub(), g.var(), Term::var(v)));
          inner.prefix.insert(inner.prefix.begin(), {g.kind() == FormulaKind::Exists, v});
          return inner;
        }
        case FormulaKind::Not: {
          Prenex inner = go(g.sub());
          for (auto& q : inner.prefix) q.first = !q.first;
          inner.matrix = Formula::negation(inner.matrix);
          return inner;
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
          Prenex a = go(g.left());
          Prenex b = go(g.right());
          a.prefix.insert(a.prefix.end(), b.prefix.begin(), b.prefix.end());
          a.matrix = g.kind() == FormulaKind::And ? Formula::conj(a.matrix, b.matrix)
                                                  : Formula::disj(a.matrix, b.matrix);
          return a;
        }
        default:
          return Prenex{{}, g};
      }
    };
    return go(f);
  });
}

Formula eliminate_all(const Formula& f, QeContext* ctx_in) {
  return with_context(ctx_in, [&](QeContext& ctx) {
    try {
      Prenex p = prenex(f, &ctx);
      Formula m = p.matrix;
      std::size_t i = p.prefix.size();
      while (i > 0) {
        bool ex = p.prefix[i - 1].first;
        std::size_t j = i;
        while (j > 0 && p.prefix[j - 1].first == ex) --j;
        std::vector<std::string> vars;
        for (std::size_t k = j; k < i; ++k) vars.push_back(p.prefix[k].second);
        if (ex) {
          m = eliminate_block(vars, m, &ctx);
        } else {
          m = simplify(Formula::negation(eliminate_block(vars, nnf(Formula::negation(m)), &ctx)));
        }
        i = j;
      }
      if (m.has_division()) m = eliminate_division(m, &ctx);
      m = simplify(m);
      ctx.report().result_length = formula_length(m, true);
      return m;
    } catch (GuardrailError& e) {
      e.set_partial(ctx.report());
      throw;
    }
  });
}

bool decide_sentence(const Formula& f, QeContext* ctx) {
  if (!free_vars(f).empty()) throw ContractError("decide_sentence: free variables");
  return decide_ground_sentence(eliminate_all(f, ctx));
}

GrowthReport collect_stats(const Formula& f, const Limits& limits) {
  QeContext ctx(limits);
  eliminate_all(f, &ctx);
  return ctx.report();
}

}  // namespace pow2qe
