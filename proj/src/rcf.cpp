#include "pow2qe/rcf.hpp"

#include <pthread.h>

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <unordered_map>

#include "pow2qe/errors.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/poly.hpp"

namespace pow2qe {

// ---------------------------------------------------------------------------
// Parameter abstraction

Term ParamAbstraction::restore(const Term& t) const {
  Term out = t;
  for (const auto& [name, term] : params) out = substitute(out, name, term);
  return out;
}

Formula ParamAbstraction::restore(const Formula& f) const {
  Formula out = f;
  for (const auto& [name, term] : params) out = substitute(out, name, term);
  return out;
}

namespace {

void bound_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out.insert(f.var());
      bound_vars(f.sub(), out);
      return;
    case FormulaKind::Not:
      bound_vars(f.sub(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      bound_vars(f.left(), out);
      bound_vars(f.right(), out);
      return;
    default:
      return;
  }
}

bool mentions_any(const Term& t, const std::set<std::string>& vs) {
  return std::any_of(vs.begin(), vs.end(), [&](const std::string& v) { return t.mentions(v); });
}

bool field_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::Pow2:
      return true;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
      return field_term(t.lhs()) && field_term(t.rhs());
    default:
      return false;
  }
}

}  // namespace

bool is_ordered_field(const Formula& f) {
  bool ok = true;
  for_each_atom(f, [&](const Formula& a) {
    if (a.kind() == FormulaKind::Dvd) ok = false;
    if (a.kind() == FormulaKind::Eq || a.kind() == FormulaKind::Lt)
      ok = ok && field_term(a.lhs()) && field_term(a.rhs());
  });
  return ok;
}

Abstracted abstract_params(const Formula& f, QeContext* ctx) {
  std::set<std::string> bound;
  bound_vars(f, bound);
  std::set<std::string> avoid = all_vars(f);
  Abstracted out;
  std::map<Term, std::string> seen;
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::Const:
      case TermKind::Pow2:
        return t;
      case TermKind::Add:
        return go(t.lhs()) + go(t.rhs());
      case TermKind::Sub:
        return go(t.lhs()) - go(t.rhs());
      case TermKind::Mul:
        return go(t.lhs()) * go(t.rhs());
      default: {
        if (mentions_any(t, bound))
          throw ContractError("abstract_params: bound variable under a rounding or quotient");
        auto it = seen.find(t);
        if (it != seen.end()) return Term::var(it->second);
        std::string name = ctx ? ctx->fresh("p") : fresh_name("_p", avoid);
        avoid.insert(name);
        seen.emplace(t, name);
        out.abstraction.params.emplace(name, t);
        out.abstraction.order.push_back(name);
        return Term::var(name);
      }
    }
  };
  out.formula = map_atoms(f, [&](const Formula& a) -> Formula {
    switch (a.kind()) {
      case FormulaKind::Eq:
        return Formula::eq(go(a.lhs()), go(a.rhs()));
      case FormulaKind::Lt:
        return Formula::lt(go(a.lhs()), go(a.rhs()));
      case FormulaKind::Dvd:
        throw ContractError("abstract_params: D_n atom in a field formula");
      default:
        return a;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Sign-matrix elimination of one existential quantifier

namespace {

enum class Sgn { Zero, Pos, Neg, Nonzero };

Sgn flip(bool f, Sgn s) {
  if (!f) return s;
  if (s == Sgn::Pos) return Sgn::Neg;
  if (s == Sgn::Neg) return Sgn::Pos;
  return s;
}

Sgn sign_of(const Rational& c) {
  int s = sgn(c);
  return s == 0 ? Sgn::Zero : (s > 0 ? Sgn::Pos : Sgn::Neg);
}

using SignCtx = std::map<Poly, Sgn>;  // keys have leading coefficient 1
using Row = std::vector<Sgn>;
using Matrix = std::vector<Row>;
using ContS = std::function<Formula(const SignCtx&)>;
using ContM = std::function<Formula(const Matrix&)>;

struct Inconsistent {};

bool has_zero(const Row& r) { return std::find(r.begin(), r.end(), Sgn::Zero) != r.end(); }

// Drops the points where nothing vanishes, merging the adjacent intervals.
Matrix condense(const Matrix& ps) {
  Matrix out;
  std::size_t i = 0;
  for (; i + 1 < ps.size(); i += 2) {
    if (has_zero(ps[i + 1])) {
      out.push_back(ps[i]);
      out.push_back(ps[i + 1]);
    }
  }
  for (; i < ps.size(); ++i) out.push_back(ps[i]);
  return out;
}

// Fills in the sign of the first column on each interval from the signs at
// its endpoints, splitting an interval where the sign changes.
Matrix inferisign(const Matrix& ps) {
  Matrix out;
  if (ps.empty()) return out;
  out.push_back(ps[0]);
  std::size_t k = 0;
  for (; k + 2 < ps.size(); k += 2) {
    Sgn l = ps[k][0], r = ps[k + 2][0];
    Row rest(ps[k + 1].begin() + 1, ps[k + 1].end());
    auto with = [&](Sgn s) {
      Row row{s};
      row.insert(row.end(), rest.begin(), rest.end());
      return row;
    };
    if (l == Sgn::Zero && r == Sgn::Zero) throw Inconsistent{};
    if (l == Sgn::Nonzero || r == Sgn::Nonzero) throw Inconsistent{};
    if (l == Sgn::Zero) {
      out.push_back(with(r));
    } else if (r == Sgn::Zero || l == r) {
      out.push_back(with(l));
    } else {
      out.push_back(with(l));
      out.push_back(with(Sgn::Zero));
      out.push_back(with(r));
    }
    out.push_back(ps[k + 2]);
  }
  return out;
}

class SignMatrix {
 public:
  SignMatrix(std::string x, QeContext* ctx) : x_(std::move(x)), ctx_(ctx) {}

  Formula exists(const Formula& body) {
    std::vector<Poly> pols;
    std::unordered_map<const FormulaNode*, std::size_t> index;
    for_each_atom(body, [&](const Formula& a) {
      Poly d;
      if (a.kind() == FormulaKind::Eq) d = canon_poly(a.lhs() - a.rhs());
      else if (a.kind() == FormulaKind::Lt) d = canon_poly(a.rhs() - a.lhs());
      else if (a.kind() == FormulaKind::True || a.kind() == FormulaKind::False) return;
      else throw ContractError("qe_rcf: non-field atom");
      if (d.mentions_opaquely(x_)) throw ContractError("qe_rcf: bound variable inside an indeterminate");
      unsigned cap = ctx_ ? ctx_->limits().rcf_max_degree : Limits{}.rcf_max_degree;
      if (d.degree(x_) > cap) throw GuardrailError("qe_rcf: degree cap exceeded");
      auto it = std::find(pols.begin(), pols.end(), d);
      index[a.node()] = static_cast<std::size_t>(it - pols.begin());
      if (it == pols.end()) pols.push_back(d);
    });
    ContM top = [&](const Matrix& m) -> Formula {
      for (const auto& row : m)
        if (testform(body, row, index)) return Formula::truth();
      return Formula::falsity();
    };
    return casesplit({}, pols, top, {});
  }

 private:
  static bool testform(const Formula& f, const Row& row,
                       const std::unordered_map<const FormulaNode*, std::size_t>& index) {
    switch (f.kind()) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Eq:
        return row[index.at(f.node())] == Sgn::Zero;
      case FormulaKind::Lt:
        return row[index.at(f.node())] == Sgn::Pos;
      case FormulaKind::Not:
        return !testform(f.sub(), row, index);
      case FormulaKind::And:
        return testform(f.left(), row, index) && testform(f.right(), row, index);
      case FormulaKind::Or:
        return testform(f.left(), row, index) || testform(f.right(), row, index);
      default:
        throw ContractError("qe_rcf: unexpected connective");
    }
  }

  unsigned deg(const Poly& p) const { return p.degree(x_); }
  Poly head(const Poly& p) const { return p.coeff(x_, deg(p)); }
  Poly behead(const Poly& p) const {
    return p - head(p) * Poly::variable(x_).pow(deg(p));
  }

  std::optional<Sgn> findsign(const SignCtx& s, const Poly& p) const {
    if (p.is_constant()) return sign_of(p.constant_value());
    auto [m, sg] = p.monic();
    auto it = s.find(m);
    if (it == s.end()) return std::nullopt;
    return flip(sg < 0, it->second);
  }

  static SignCtx assertsign(SignCtx s, const Poly& p, Sgn v) {
    if (p.is_constant()) {
      Sgn c = sign_of(p.constant_value());
      if (c == v || (v == Sgn::Nonzero && c != Sgn::Zero)) return s;
      throw Inconsistent{};
    }
    auto [m, sg] = p.monic();
    Sgn w = flip(sg < 0, v);
    auto it = s.find(m);
    if (it == s.end()) {
      s.emplace(std::move(m), w);
      return s;
    }
    Sgn old = it->second;
    if (old == w) return s;
    if (old == Sgn::Nonzero && (w == Sgn::Pos || w == Sgn::Neg)) {
      it->second = w;
      return s;
    }
    if (w == Sgn::Nonzero && (old == Sgn::Pos || old == Sgn::Neg)) return s;
    throw Inconsistent{};
  }

  Formula branch(const ContS& k, const SignCtx& s, const Poly& p, Sgn v) {
    SignCtx next;
    try {
      next = assertsign(s, p, v);
    } catch (const Inconsistent&) {
      return Formula::falsity();
    }
    return k(next);
  }

  Formula split_zero(const SignCtx& s, const Poly& p, const ContS& cz, const ContS& cn) {
    if (auto v = findsign(s, p)) return *v == Sgn::Zero ? cz(s) : cn(s);
    Formula eq = Formula::eq(to_term(p.primitive()), Term::constant(0));
    Formula a = branch(cz, s, p, Sgn::Zero);
    Formula b = branch(cn, s, p, Sgn::Nonzero);
    return mk_or({mk_and({eq, a}), mk_and({Formula::negation(eq), b})});
  }

  Formula split_sign(const SignCtx& s, const Poly& p, const ContS& k) {
    auto v = findsign(s, p);
    if (!v || *v != Sgn::Nonzero) return k(s);
    Formula gt = Formula::lt(Term::constant(0), to_term(p.primitive()));
    Formula a = branch(k, s, p, Sgn::Pos);
    Formula b = branch(k, s, p, Sgn::Neg);
    return mk_or({mk_and({gt, a}), mk_and({Formula::negation(gt), b})});
  }

  Formula split_trichotomy(const SignCtx& s, const Poly& p, const ContS& cz, const ContS& cpn) {
    return split_zero(s, p, cz, [&](const SignCtx& t) { return split_sign(t, p, cpn); });
  }

  Formula casesplit(const std::vector<Poly>& dun, const std::vector<Poly>& pols, const ContM& cont,
                    const SignCtx& s) {
    if (pols.empty()) return matrix(dun, cont, s);
    const Poly& p = pols.front();
    std::vector<Poly> ops(pols.begin() + 1, pols.end());
    bool constant = !p.mentions(x_);
    Poly h = constant ? p : head(p);
    return split_trichotomy(
        s, h,
        [&](const SignCtx& t) {
          if (constant) return delconst(dun, p, ops, cont, t);
          std::vector<Poly> next{behead(p)};
          next.insert(next.end(), ops.begin(), ops.end());
          return casesplit(dun, next, cont, t);
        },
        [&](const SignCtx& t) {
          if (constant) return delconst(dun, p, ops, cont, t);
          std::vector<Poly> next = dun;
          next.push_back(p);
          return casesplit(next, ops, cont, t);
        });
  }

  Formula delconst(const std::vector<Poly>& dun, const Poly& p, const std::vector<Poly>& ops,
                   const ContM& cont, const SignCtx& s) {
    std::size_t at = dun.size();
    Sgn v = *findsign(s, p);
    ContM k = [&](const Matrix& m) {
      Matrix out = m;
      for (auto& row : out) row.insert(row.begin() + static_cast<long>(at), v);
      return cont(out);
    };
    return casesplit(dun, ops, k, s);
  }

  // a^k p = q d + r with a the leading coefficient of d; returns a polynomial
  // with the sign of p at every root of d.
  Poly pdivide_pos(const SignCtx& s, const Poly& p, const Poly& d) const {
    Poly a = head(d);
    unsigned dd = deg(d);
    Poly r = p;
    unsigned k = 0;
    Poly xv = Poly::variable(x_);
    while (!r.is_zero() && deg(r) >= dd) {
      unsigned dr = deg(r);
      Poly lr = r.coeff(x_, dr);
      r = a * r - lr * xv.pow(dr - dd) * d;
      ++k;
    }
    r = r.primitive();
    auto v = findsign(s, a);
    if (!v || *v == Sgn::Zero) throw ContractError("qe_rcf: divisor with vanishing leading coefficient");
    if (*v == Sgn::Pos || k % 2 == 0) return r;
    if (*v == Sgn::Neg) return -r;
    return (a * r).primitive();
  }

  Formula matrix(const std::vector<Poly>& pols, const ContM& cont, const SignCtx& s) {
    if (pols.empty()) {
      try {
        return cont(Matrix{Row{}});
      } catch (const Inconsistent&) {
        return Formula::falsity();
      }
    }
    if (ctx_) ctx_->check_time();
    std::size_t i = 0;
    for (std::size_t j = 1; j < pols.size(); ++j)
      if (deg(pols[j]) > deg(pols[i])) i = j;
    const Poly& p = pols[i];
    std::vector<Poly> qs{p.derivative(x_).primitive()};
    for (std::size_t j = 0; j < pols.size(); ++j)
      if (j != i) qs.push_back(pols[j]);
    std::vector<Poly> all = qs;
    for (const auto& q : qs) all.push_back(pdivide_pos(s, p, q));
    ContM put_back = [&](const Matrix& m) {
      Matrix out;
      out.reserve(m.size());
      for (const auto& row : m) {
        Row r(row.begin() + 1, row.end());
        r.insert(r.begin() + static_cast<long>(i), row[0]);
        out.push_back(std::move(r));
      }
      return cont(out);
    };
    ContM ded = [&](const Matrix& m) { return dedmatrix(put_back, m); };
    return casesplit({}, all, ded, s);
  }

  Formula dedmatrix(const ContM& cont, const Matrix& mat) {
    if (ctx_) {
      ctx_->rcf_cells() += mat.size();
      if (ctx_->rcf_cells() > ctx_->limits().rcf_max_cells)
        throw GuardrailError("qe_rcf: cell cap exceeded");
    }
    std::size_t l = mat.front().size() / 2;
    Matrix m1;
    m1.reserve(mat.size());
    for (const auto& row : mat) {
      Row r{Sgn::Nonzero};
      for (std::size_t j = 0; j < l; ++j) {
        if (row[j] == Sgn::Zero) {
          r[0] = row[l + j];
          break;
        }
      }
      r.insert(r.end(), row.begin(), row.begin() + static_cast<long>(l));
      m1.push_back(std::move(r));
    }
    m1 = condense(m1);
    Matrix m2;
    m2.push_back({flip(true, m1.front()[1])});
    m2.insert(m2.end(), m1.begin(), m1.end());
    m2.push_back({m1.back()[1]});
    Matrix m3 = inferisign(m2);
    Matrix out;
    for (std::size_t j = 1; j + 1 < m3.size(); ++j) {
      Row r{m3[j][0]};
      r.insert(r.end(), m3[j].begin() + 2, m3[j].end());
      out.push_back(std::move(r));
    }
    return cont(condense(out));
  }

  std::string x_;
  QeContext* ctx_;
};

constexpr std::size_t kClauseBudget = 20'000;

Formula exists_conj(const std::string& x, const std::vector<Formula>& with_x, QeContext* ctx,
                    bool params) {
  if (ctx) ctx->count_rcf_call();
  Formula body = conj_all(with_x);
  if (!params) return simplify(SignMatrix(x, ctx).exists(body));
  // a D_n atom nested inside a compound conjunct: split on its truth value
  std::optional<Formula> dn;
  for_each_atom(body, [&](const Formula& a) {
    if (!dn && a.kind() == FormulaKind::Dvd) dn = a;
  });
  if (dn) {
    if (dn->mentions(x)) throw ContractError("qe_rcf: quantified variable inside a D_n atom");
    auto fix = [&](bool v) {
      return simplify(map_atoms(body, [&](const Formula& a) { return a == *dn ? Formula::boolean(v) : a; }));
    };
    return mk_or({mk_and({*dn, exists_conj(x, {fix(true)}, ctx, params)}),
                  mk_and({Formula::negation(*dn), exists_conj(x, {fix(false)}, ctx, params)})});
  }
  Abstracted a = abstract_params(Formula::exists(x, body), ctx);
  return simplify(a.abstraction.restore(SignMatrix(x, ctx).exists(a.formula.sub())));
}

Formula eliminate_exists(const std::string& x, const Formula& body, QeContext* ctx, bool params) {
  Formula b = simplify(body);
  if (!b.mentions(x)) return b;
  Formula n = nnf(b);
  std::vector<Clause> clauses;
  try {
    clauses = dnf_clauses(n, [&](const Formula& g) { return !g.mentions(x); }, kClauseBudget);
  } catch (const BlowupError&) {
    clauses.clear();
    for (const auto& d : disjuncts(n)) clauses.push_back(conjuncts(d));
  }
  std::vector<Formula> out;
  for (const auto& clause : clauses) {
    std::vector<Formula> with_x, without_x;
    for (const auto& lit : clause) (lit.mentions(x) ? with_x : without_x).push_back(lit);
    if (!with_x.empty()) without_x.push_back(exists_conj(x, with_x, ctx, params));
    out.push_back(mk_and(without_x));
    if (out.back().is_true()) break;
    if (ctx) ctx->check_size(out.size(), "qe_rcf");
  }
  return simplify(mk_or(out));
}

Formula lift(const Formula& f, QeContext* ctx, bool params) {
  switch (f.kind()) {
    case FormulaKind::Not:
      return simplify(Formula::negation(lift(f.sub(), ctx, params)));
    case FormulaKind::And:
      return mk_and({lift(f.left(), ctx, params), lift(f.right(), ctx, params)});
    case FormulaKind::Or:
      return mk_or({lift(f.left(), ctx, params), lift(f.right(), ctx, params)});
    case FormulaKind::Exists:
      return eliminate_exists(f.var(), lift(f.sub(), ctx, params), ctx, params);
    case FormulaKind::Forall:
      return simplify(Formula::negation(eliminate_exists(
          f.var(), nnf(Formula::negation(lift(f.sub(), ctx, params))), ctx, params)));
    default:
      return f;
  }
}

// The sign-matrix recursion runs thousands of frames deep on parametric
// cubics, so the kernel gets its own thread with a large stack.
constexpr std::size_t kKernelStack = std::size_t{1} << 30;
thread_local bool on_kernel_stack = false;

template <class Fn>
Formula on_large_stack(Fn fn) {
  if (on_kernel_stack) return fn();
  struct Job {
    Fn* fn;
    Formula out;
    std::exception_ptr error;
  } job{&fn, {}, nullptr};
  auto run = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    on_kernel_stack = true;
    try {
      j->out = (*j->fn)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kKernelStack);
  pthread_t th;
  int rc = pthread_create(&th, &attr, run, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) return fn();
  pthread_join(th, nullptr);
  if (job.error) std::rethrow_exception(job.error);
  return job.out;
}

}  // namespace

Formula qe_rcf(const Formula& f, QeContext* ctx) {
  if (!is_ordered_field(f)) throw ContractError("qe_rcf: input is not an ordered-field formula");
  return on_large_stack([&] { return simplify(lift(f, ctx, false)); });
}

bool decide_rcf_sentence(const Formula& f, QeContext* ctx) {
  if (!free_vars(f).empty()) throw ContractError("decide_rcf_sentence: free variables");
  return decide_ground_sentence(qe_rcf(f, ctx));
}

Formula qe_rcf_with_params(const Formula& f, QeContext* ctx) {
  return on_large_stack([&] { return simplify(lift(f, ctx, true)); });
}

}  // namespace pow2qe
