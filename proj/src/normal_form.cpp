#include "pow2qe/normal_form.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_set>

#include "pow2qe/errors.hpp"

namespace pow2qe {

namespace {

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
using FormulaSet = std::unordered_set<Formula, FormulaHash>;

Formula complement(const Formula& f) {
  return f.kind() == FormulaKind::Not ? f.sub() : Formula::negation(f);
}

}  // namespace

Formula nnf(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And:
      return Formula::conj(nnf(f.left()), nnf(f.right()));
    case FormulaKind::Or:
      return Formula::disj(nnf(f.left()), nnf(f.right()));
    case FormulaKind::Exists:
      return Formula::exists(f.var(), nnf(f.sub()));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), nnf(f.sub()));
    case FormulaKind::Not: {
      const Formula& g = f.sub();
      switch (g.kind()) {
        case FormulaKind::True:
          return Formula::falsity();
        case FormulaKind::False:
          return Formula::truth();
        case FormulaKind::Not:
          return nnf(g.sub());
        case FormulaKind::And:
          return Formula::disj(nnf(Formula::negation(g.left())), nnf(Formula::negation(g.right())));
        case FormulaKind::Or:
          return Formula::conj(nnf(Formula::negation(g.left())), nnf(Formula::negation(g.right())));
        case FormulaKind::Exists:
          return Formula::forall(g.var(), nnf(Formula::negation(g.sub())));
        case FormulaKind::Forall:
          return Formula::exists(g.var(), nnf(Formula::negation(g.sub())));
        default:
          return f;
      }
    }
    default:
      return f;
  }
}

namespace {

class DnfBuilder {
 public:
  DnfBuilder(const std::function<bool(const Formula&)>& leaf, std::size_t cap)
      : leaf_(leaf), cap_(cap) {}

  std::vector<Clause> run(const Formula& f) {
    if (leaf_ && leaf_(f)) return {{f}};
    switch (f.kind()) {
      case FormulaKind::True:
        return {Clause{}};
      case FormulaKind::False:
        return {};
      case FormulaKind::Or: {
        auto a = run(f.left());
        auto b = run(f.right());
        a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
        return a;
      }
      case FormulaKind::And: {
        auto a = run(f.left());
        if (a.empty()) return a;
        auto b = run(f.right());
        std::vector<Clause> out;
        std::size_t total = 0;
        for (const auto& ca : a) {
          for (const auto& cb : b) {
            auto merged = merge(ca, cb);
            if (!merged) continue;
            total += merged->size() + 1;
            if (total > cap_) throw BlowupError("DNF node cap exceeded");
            out.push_back(std::move(*merged));
          }
        }
        return out;
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        throw ContractError("dnf of a quantified formula");
      default:
        return {{f}};
    }
  }

 private:
  static std::optional<Clause> merge(const Clause& a, const Clause& b) {
    Clause out = a;
    FormulaSet seen(a.begin(), a.end());
    for (const auto& l : b) {
      if (seen.count(complement(l))) return std::nullopt;
      if (seen.insert(l).second) out.push_back(l);
    }
    return out;
  }

  const std::function<bool(const Formula&)>& leaf_;
  std::size_t cap_;
};

std::vector<Clause> clean_clauses(std::vector<Clause> cs) {
  std::vector<Clause> out;
  for (auto& c : cs) {
    FormulaSet seen;
    Clause d;
    bool contradictory = false;
    for (const auto& l : c) {
      if (l.is_true()) continue;
      if (l.is_false() || seen.count(complement(l))) {
        contradictory = true;
        break;
      }
      if (seen.insert(l).second) d.push_back(l);
    }
    if (!contradictory) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

std::vector<Clause> dnf_clauses(const Formula& f, std::size_t cap) {
  return dnf_clauses(f, {}, cap);
}

std::vector<Clause> dnf_clauses(const Formula& f, const std::function<bool(const Formula&)>& leaf,
                                std::size_t cap) {
  DnfBuilder b(leaf, cap);
  return clean_clauses(b.run(nnf(f)));
}

Formula from_clauses(const std::vector<Clause>& clauses) {
  std::vector<Formula> ds;
  ds.reserve(clauses.size());
  for (const auto& c : clauses) ds.push_back(conj_all(c));
  return disj_all(ds);
}

Formula to_dnf(const Formula& f, std::size_t cap) { return from_clauses(dnf_clauses(f, cap)); }

namespace {

Formula mk_junction(const std::vector<Formula>& fs, bool is_and) {
  FormulaKind kind = is_and ? FormulaKind::And : FormulaKind::Or;
  std::vector<Formula> flat;
  for (const auto& f : fs) {
    if (f.kind() == kind) {
      auto parts = is_and ? conjuncts(f) : disjuncts(f);
      flat.insert(flat.end(), parts.begin(), parts.end());
    } else {
      flat.push_back(f);
    }
  }
  std::vector<Formula> out;
  FormulaSet seen;
  for (const auto& f : flat) {
    if (is_and ? f.is_true() : f.is_false()) continue;
    if (is_and ? f.is_false() : f.is_true()) return Formula::boolean(!is_and);
    if (seen.count(complement(f))) return Formula::boolean(!is_and);
    if (seen.insert(f).second) out.push_back(f);
  }
  return is_and ? conj_all(out) : disj_all(out);
}

}  // namespace

Formula mk_and(const std::vector<Formula>& fs) { return mk_junction(fs, true); }
Formula mk_or(const std::vector<Formula>& fs) { return mk_junction(fs, false); }

namespace {

Formula canon_lt_poly(const Poly& p);

bool only_lambdas(const Monomial& m) {
  return std::all_of(m.begin(), m.end(),
                     [](const auto& f) { return f.first.kind() == TermKind::Lambda; });
}

Formula positive_args(const Monomial& m) {
  std::vector<Formula> cs;
  for (const auto& [t, e] : m) cs.push_back(canon_lt_poly(canon_poly(t.arg())));
  return mk_and(cs);
}

Formula canon_eq_poly(const Poly& p) {
  if (p.is_constant()) return Formula::boolean(p.is_zero());
  if (p.is_single_monomial()) {
    const Monomial& m = p.terms().begin()->first;
    if (m.size() > 1 || m.front().second > 1 || m.front().first.kind() == TermKind::Lambda) {
      // a product vanishes iff a factor does
      std::vector<Formula> ds;
      for (const auto& [t, e] : m) {
        if (t.kind() == TermKind::Lambda)
          ds.push_back(Formula::negation(canon_lt_poly(canon_poly(t.arg()))));
        else
          ds.push_back(Formula::eq(t, Term::constant(0)));
      }
      return mk_or(ds);
    }
  }
  Poly q = p.primitive();
  if (sgn(q.leading_coefficient()) < 0) q = -q;
  return Formula::eq(to_term(q), Term::constant(0));
}

Formula canon_lt_poly(const Poly& p) {
  if (p.is_constant()) return Formula::boolean(sgn(p.constant_value()) > 0);
  if (p.is_single_monomial()) {
    const auto& [m, c] = *p.terms().begin();
    if (only_lambdas(m)) {
      if (sgn(c) < 0) return Formula::falsity();
      return positive_args(m);
    }
  }
  return Formula::lt(Term::constant(0), to_term(p.primitive()));
}

long mod_floor(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

Formula canon_dvd_poly(long n, const Poly& p) {
  if (p.is_constant()) {
    Rational c = p.constant_value();
    if (sgn(c) <= 0) return Formula::falsity();
    auto k = exact_log2(c);
    return Formula::boolean(k && mod_floor(*k, n) == 0);
  }
  if (p.is_single_monomial()) {
    const auto& [m, c] = *p.terms().begin();
    if (only_lambdas(m)) {
      auto k = exact_log2(c);
      if (sgn(c) <= 0 || !k) return Formula::falsity();
      if (n == 1) return positive_args(m);
    }
  }
  long v = two_adic_valuation(p.leading_coefficient());
  long r = mod_floor(v, n);
  return Formula::dvd(n, to_term(p * pow2(r - v)));
}

}  // namespace

Formula canon_atom(const Formula& atom) {
  switch (atom.kind()) {
    case FormulaKind::Eq:
      return canon_eq_poly(canon_poly(atom.lhs() - atom.rhs()));
    case FormulaKind::Lt:
      return canon_lt_poly(canon_poly(atom.rhs() - atom.lhs()));
    case FormulaKind::Dvd:
      return canon_dvd_poly(atom.modulus(), canon_poly(atom.term()));
    default:
      return atom;
  }
}

Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
    case FormulaKind::Dvd: {
      // canonical atoms may expand into compound formulas; settle them
      Formula c = canon_atom(f);
      if (c.is_atom() || c.is_true() || c.is_false()) return c;
      return simplify(c);
    }
    case FormulaKind::Not: {
      Formula s = simplify(f.sub());
      if (s.is_true()) return Formula::falsity();
      if (s.is_false()) return Formula::truth();
      if (s.kind() == FormulaKind::Not) return s.sub();
      return Formula::negation(s);
    }
    case FormulaKind::And: {
      std::vector<Formula> cs;
      for (const auto& c : conjuncts(f)) {
        Formula s = simplify(c);
        if (s.is_false()) return s;
        cs.push_back(s);
      }
      return mk_and(cs);
    }
    case FormulaKind::Or: {
      std::vector<Formula> ds;
      for (const auto& d : disjuncts(f)) {
        Formula s = simplify(d);
        if (s.is_true()) return s;
        ds.push_back(s);
      }
      return mk_or(ds);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Formula body = simplify(f.sub());
      if (!body.mentions(f.var())) return body;
      return f.kind() == FormulaKind::Exists ? Formula::exists(f.var(), body)
                                             : Formula::forall(f.var(), body);
    }
  }
  return f;
}

namespace {

// Every occurrence of x lies outside rounding and quotient nodes.
bool plain_in(const Term& t, const std::string& x) {
  if (!t.mentions(x)) return true;
  switch (t.kind()) {
    case TermKind::Lambda:
    case TermKind::Div:
      return false;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
      return plain_in(t.lhs(), x) && plain_in(t.rhs(), x);
    default:
      return true;
  }
}

}  // namespace

std::optional<long> shift_of(const Term& t, const std::string& x) {
  if (t.is_var(x)) return 0;
  if (t.kind() == TermKind::Mul && t.rhs().is_var(x) && t.lhs().is_numeral()) {
    if (auto k = exact_log2(t.lhs().numeral_value()); k && *k >= 0) return *k;
  }
  return std::nullopt;
}

Formula dn_shift_atom(long n, long r, const std::string& x) {
  long s = mod_floor(r, n);
  return Formula::dvd(n, to_term(Poly(pow2(s)) * Poly::variable(x)));
}

Formula normalize_atoms(const Formula& f, const std::string& x) {
  Formula g = nnf(f);
  auto eq0 = [](const Poly& p) { return Formula::eq(to_term(p), Term::constant(0)); };
  auto gt0 = [](const Poly& p) { return Formula::lt(Term::constant(0), to_term(p)); };
  std::function<Formula(const Formula&)> go = [&](const Formula& h) -> Formula {
    switch (h.kind()) {
      case FormulaKind::True:
      case FormulaKind::False:
        return h;
      case FormulaKind::And:
        return Formula::conj(go(h.left()), go(h.right()));
      case FormulaKind::Or:
        return Formula::disj(go(h.left()), go(h.right()));
      case FormulaKind::Eq:
        return eq0(canon_poly(h.lhs() - h.rhs()));
      case FormulaKind::Lt:
        return gt0(canon_poly(h.rhs() - h.lhs()));
      case FormulaKind::Dvd:
        if (h.term().mentions(x) && !shift_of(h.term(), x))
          throw ContractError("normalize_atoms: D_n argument is not a monomial in " + x);
        return h;
      case FormulaKind::Not: {
        const Formula& a = h.sub();
        if (a.kind() == FormulaKind::Eq) {
          Poly d = canon_poly(a.lhs() - a.rhs());
          return Formula::disj(gt0(d), gt0(-d));
        }
        if (a.kind() == FormulaKind::Lt) {
          Poly d = canon_poly(a.lhs() - a.rhs());
          return Formula::disj(gt0(d), eq0(d));
        }
        if (a.kind() == FormulaKind::Dvd) {
          if (a.term().mentions(x) && !shift_of(a.term(), x))
            throw ContractError("normalize_atoms: D_n argument is not a monomial in " + x);
          return h;
        }
        throw ContractError("normalize_atoms: negation above a non-atom");
      }
      default:
        throw ContractError("normalize_atoms: quantified input");
    }
  };
  return go(g);
}

bool is_simple_in(const std::string& x, const Formula& f) {
  bool ok = true;
  for_each_atom(f, [&](const Formula& a) {
    if (!ok) return;
    switch (a.kind()) {
      case FormulaKind::Eq:
        if (a.lhs().mentions(x) || a.rhs().mentions(x))
          ok = a.rhs().is_zero() && plain_in(a.lhs(), x);
        break;
      case FormulaKind::Lt:
        if (a.lhs().mentions(x) || a.rhs().mentions(x))
          ok = a.lhs().is_zero() && plain_in(a.rhs(), x);
        break;
      case FormulaKind::Dvd:
        if (a.term().mentions(x)) {
          auto r = shift_of(a.term(), x);
          ok = r && *r < a.modulus();
        }
        break;
      default:
        break;
    }
  });
  return ok && !f.has_quantifier();
}

namespace {

// Allowed signs of a polynomial as a bit set: 1 negative, 2 zero, 4 positive.
struct SignFacts {
  std::map<Poly, int> signs;
  std::map<Formula, bool> atoms;
};

struct SignLiteral {
  Poly key;
  int mask;
};

std::optional<SignLiteral> sign_literal(const Formula& lit) {
  bool neg = lit.kind() == FormulaKind::Not;
  const Formula& a = neg ? lit.sub() : lit;
  Poly p;
  int mask;
  if (a.kind() == FormulaKind::Eq) {
    p = canon_poly(a.lhs() - a.rhs());
    mask = 2;
  } else if (a.kind() == FormulaKind::Lt) {
    p = canon_poly(a.rhs() - a.lhs());
    mask = 4;
  } else {
    return std::nullopt;
  }
  if (p.is_constant()) return std::nullopt;
  p = p.primitive();
  if (sgn(p.leading_coefficient()) < 0) {
    p = -p;
    if (mask == 4) mask = 1;
  }
  return SignLiteral{p, neg ? 7 & ~mask : mask};
}

bool is_literal(const Formula& f) {
  return f.is_atom() || (f.kind() == FormulaKind::Not && f.sub().is_atom());
}

// 1 when the facts imply lit, 0 when they refute it, -1 otherwise.
int decide(const Formula& lit, const SignFacts& facts) {
  if (auto s = sign_literal(lit)) {
    auto it = facts.signs.find(s->key);
    if (it == facts.signs.end()) return -1;
    if ((it->second & ~s->mask) == 0) return 1;
    if ((it->second & s->mask) == 0) return 0;
    return -1;
  }
  bool neg = lit.kind() == FormulaKind::Not;
  auto it = facts.atoms.find(neg ? lit.sub() : lit);
  if (it == facts.atoms.end()) return -1;
  return it->second != neg ? 1 : 0;
}

// False when the facts become contradictory.
bool assume(const Formula& lit, SignFacts& facts) {
  if (auto s = sign_literal(lit)) {
    auto [it, fresh] = facts.signs.emplace(s->key, s->mask);
    if (!fresh) it->second &= s->mask;
    return it->second != 0;
  }
  if (lit.is_true()) return true;
  if (lit.is_false()) return false;
  bool neg = lit.kind() == FormulaKind::Not;
  auto [it, fresh] = facts.atoms.emplace(neg ? lit.sub() : lit, !neg);
  return fresh || it->second == !neg;
}

Formula prune(const Formula& f, const SignFacts& outer) {
  if (is_literal(f)) {
    int d = decide(f, outer);
    return d < 0 ? f : Formula::boolean(d == 1);
  }
  if (f.kind() == FormulaKind::And) {
    std::vector<Formula> lits, rest;
    for (const auto& c : conjuncts(f)) (is_literal(c) ? lits : rest).push_back(c);
    SignFacts all = outer;
    for (const auto& l : lits)
      if (!assume(l, all)) return Formula::falsity();
    std::vector<Formula> out;
    // keep a literal unless the context and the other literals give it
    for (std::size_t i = 0; i < lits.size(); ++i) {
      SignFacts others = outer;
      for (std::size_t j = 0; j < lits.size(); ++j)
        if (j != i) assume(lits[j], others);
      if (decide(lits[i], others) != 1) out.push_back(lits[i]);
    }
    for (const auto& r : rest) {
      Formula p = prune(r, all);
      if (p.is_false()) return p;
      out.push_back(p);
    }
    return mk_and(out);
  }
  if (f.kind() == FormulaKind::Or) {
    // A or B is A or (not A and B) for a literal A
    SignFacts ctx = outer;
    std::vector<Formula> out;
    auto ds = disjuncts(f);
    std::stable_partition(ds.begin(), ds.end(), is_literal);
    bool open = true;
    for (const auto& d : ds) {
      Formula p = prune(d, ctx);
      if (p.is_true()) return p;
      out.push_back(p);
      if (is_literal(p) && open) open = assume(complement(p), ctx);
      if (!open) break;
    }
    return mk_or(out);
  }
  if (f.kind() == FormulaKind::Not) return simplify(Formula::negation(prune(f.sub(), outer)));
  return f;
}

}  // namespace

Formula prune_by_signs(const Formula& f) {
  Formula cur = f;
  for (int round = 0; round < 4; ++round) {
    Formula next = prune(cur, SignFacts{});
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

}  // namespace pow2qe
