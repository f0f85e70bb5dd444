#include "pow2qe/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace pow2qe {

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  Term t1;
  Term t2;
  long n = 0;
  Formula f1{nullptr};
  Formula f2{nullptr};
  std::string var;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::uint64_t var_mask = 0;
  bool has_quantifier = false;
  bool has_div = false;
  bool has_lambda = false;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::uint64_t name_bit(const std::string& n) {
  return std::uint64_t{1} << (std::hash<std::string>{}(n) % 64);
}

std::uint64_t term_mask(const Term& t) {
  std::uint64_t m = 0;
  for (const auto& v : free_vars(t)) m |= name_bit(v);
  return m;
}

std::shared_ptr<const FormulaNode> constant_node(FormulaKind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->hash = static_cast<std::size_t>(k) * 7919;
  return n;
}

const std::shared_ptr<const FormulaNode>& true_node() {
  static const auto n = constant_node(FormulaKind::True);
  return n;
}
const std::shared_ptr<const FormulaNode>& false_node() {
  static const auto n = constant_node(FormulaKind::False);
  return n;
}

}  // namespace

Formula::Formula() : node_(true_node()) {}
Formula Formula::truth() { return Formula(true_node()); }
Formula Formula::falsity() { return Formula(false_node()); }

namespace {

std::shared_ptr<FormulaNode> atom_node(FormulaKind k, Term a, Term b, long n) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = k;
  node->n = n;
  node->hash = mix(mix(mix(static_cast<std::size_t>(k), a.hash()), b.hash()),
                   static_cast<std::size_t>(n));
  node->size = 1 + a.size() + (k == FormulaKind::Dvd ? 0 : b.size());
  node->var_mask = term_mask(a) | term_mask(b);
  node->has_div = a.has_division() || b.has_division();
  node->has_lambda = a.has_lambda() || b.has_lambda();
  node->t1 = std::move(a);
  node->t2 = std::move(b);
  return node;
}

}  // namespace

Formula Formula::eq(Term a, Term b) {
  return Formula(atom_node(FormulaKind::Eq, std::move(a), std::move(b), 0));
}
Formula Formula::lt(Term a, Term b) {
  return Formula(atom_node(FormulaKind::Lt, std::move(a), std::move(b), 0));
}
Formula Formula::dvd(long n, Term t) {
  if (n < 1) throw std::invalid_argument("D_n requires n >= 1");
  return Formula(atom_node(FormulaKind::Dvd, std::move(t), Term(), n));
}

Formula Formula::negation(Formula f) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaKind::Not;
  node->hash = mix(static_cast<std::size_t>(FormulaKind::Not), f.hash());
  node->size = 1 + f.size();
  node->var_mask = f.node()->var_mask;
  node->has_quantifier = f.has_quantifier();
  node->has_div = f.has_division();
  node->has_lambda = f.has_lambda();
  node->f1 = std::move(f);
  return Formula(std::move(node));
}

namespace {

std::shared_ptr<FormulaNode> binary_node(FormulaKind k, Formula a, Formula b) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = k;
  node->hash = mix(mix(static_cast<std::size_t>(k), a.hash()), b.hash());
  node->size = 1 + a.size() + b.size();
  node->var_mask = a.node()->var_mask | b.node()->var_mask;
  node->has_quantifier = a.has_quantifier() || b.has_quantifier();
  node->has_div = a.has_division() || b.has_division();
  node->has_lambda = a.has_lambda() || b.has_lambda();
  node->f1 = std::move(a);
  node->f2 = std::move(b);
  return node;
}

std::shared_ptr<FormulaNode> quant_node(FormulaKind k, std::string v, Formula body) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = k;
  node->hash = mix(mix(static_cast<std::size_t>(k), std::hash<std::string>{}(v)), body.hash());
  node->size = 2 + body.size();
  node->var_mask = body.node()->var_mask | name_bit(v);
  node->has_quantifier = true;
  node->has_div = body.has_division();
  node->has_lambda = body.has_lambda();
  node->var = std::move(v);
  node->f1 = std::move(body);
  return node;
}

}  // namespace

Formula Formula::conj(Formula a, Formula b) {
  return Formula(binary_node(FormulaKind::And, std::move(a), std::move(b)));
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula(binary_node(FormulaKind::Or, std::move(a), std::move(b)));
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula(quant_node(FormulaKind::Exists, std::move(var), std::move(body)));
}
Formula Formula::forall(std::string var, Formula body) {
  return Formula(quant_node(FormulaKind::Forall, std::move(var), std::move(body)));
}

Formula Formula::iff(Formula a, Formula b) {
  return disj(conj(a, b), conj(negation(a), negation(b)));
}

FormulaKind Formula::kind() const { return node_->kind; }
bool Formula::is_atom() const {
  auto k = kind();
  return k == FormulaKind::Eq || k == FormulaKind::Lt || k == FormulaKind::Dvd;
}
bool Formula::is_literal() const {
  return is_atom() || (kind() == FormulaKind::Not && sub().is_atom());
}
bool Formula::is_quantifier() const {
  return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall;
}
const Term& Formula::lhs() const { return node_->t1; }
const Term& Formula::rhs() const { return node_->t2; }
long Formula::modulus() const { return node_->n; }
const Term& Formula::term() const { return node_->t1; }
const Formula& Formula::sub() const { return node_->f1; }
const Formula& Formula::left() const { return node_->f1; }
const Formula& Formula::right() const { return node_->f2; }
const std::string& Formula::var() const { return node_->var; }
std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }
bool Formula::has_quantifier() const { return node_->has_quantifier; }
bool Formula::has_division() const { return node_->has_div; }
bool Formula::has_lambda() const { return node_->has_lambda; }

bool Formula::mentions(const std::string& v) const {
  if ((node_->var_mask & name_bit(v)) == 0) return false;
  switch (kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return false;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return lhs().mentions(v) || rhs().mentions(v);
    case FormulaKind::Dvd:
      return term().mentions(v);
    case FormulaKind::Not:
      return sub().mentions(v);
    case FormulaKind::And:
    case FormulaKind::Or:
      return left().mentions(v) || right().mentions(v);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return var() != v && sub().mentions(v);
  }
  return false;
}

int compare(const Formula& a, const Formula& b) {
  if (a.node() == b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  switch (a.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return 0;
    case FormulaKind::Eq:
    case FormulaKind::Lt: {
      int c = compare(a.lhs(), b.lhs());
      return c != 0 ? c : compare(a.rhs(), b.rhs());
    }
    case FormulaKind::Dvd:
      if (a.modulus() != b.modulus()) return a.modulus() < b.modulus() ? -1 : 1;
      return compare(a.term(), b.term());
    case FormulaKind::Not:
      return compare(a.sub(), b.sub());
    case FormulaKind::And:
    case FormulaKind::Or: {
      int c = compare(a.left(), b.left());
      return c != 0 ? c : compare(a.right(), b.right());
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (a.var() != b.var()) return a.var() < b.var() ? -1 : 1;
      return compare(a.sub(), b.sub());
    }
  }
  return 0;
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::truth();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::conj(out, fs[i]);
  return out;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::falsity();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
  return out;
}

namespace {

void flatten(const Formula& f, FormulaKind k, std::vector<Formula>& out) {
  if (f.kind() == k) {
    flatten(f.left(), k, out);
    flatten(f.right(), k, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

std::vector<Formula> conjuncts(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, FormulaKind::And, out);
  return out;
}

std::vector<Formula> disjuncts(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, FormulaKind::Or, out);
  return out;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
    case FormulaKind::Dvd: {
      std::set<std::string> vs;
      collect_vars(f.lhs(), vs);
      if (f.kind() != FormulaKind::Dvd) collect_vars(f.rhs(), vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case FormulaKind::Not:
      collect_free(f.sub(), bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool inserted = bound.insert(f.var()).second;
      collect_free(f.sub(), bound, out);
      if (inserted) bound.erase(f.var());
      return;
    }
  }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
      return;
    case FormulaKind::Dvd:
      collect_vars(f.term(), out);
      return;
    case FormulaKind::Not:
      collect_all(f.sub(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_all(f.left(), out);
      collect_all(f.right(), out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out.insert(f.var());
      collect_all(f.sub(), out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
    case FormulaKind::Dvd:
      return fn(f);
    case FormulaKind::Not:
      return Formula::negation(map_atoms(f.sub(), fn));
    case FormulaKind::And:
      return Formula::conj(map_atoms(f.left(), fn), map_atoms(f.right(), fn));
    case FormulaKind::Or:
      return Formula::disj(map_atoms(f.left(), fn), map_atoms(f.right(), fn));
    case FormulaKind::Exists:
      return Formula::exists(f.var(), map_atoms(f.sub(), fn));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), map_atoms(f.sub(), fn));
  }
  return f;
}

Formula map_terms(const Formula& f, const std::function<Term(const Term&)>& fn) {
  return map_atoms(f, [&](const Formula& a) {
    switch (a.kind()) {
      case FormulaKind::Eq:
        return Formula::eq(fn(a.lhs()), fn(a.rhs()));
      case FormulaKind::Lt:
        return Formula::lt(fn(a.lhs()), fn(a.rhs()));
      default:
        return Formula::dvd(a.modulus(), fn(a.term()));
    }
  });
}

void for_each_atom(const Formula& f, const std::function<void(const Formula&)>& fn) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
    case FormulaKind::Dvd:
      fn(f);
      return;
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      for_each_atom(f.sub(), fn);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      for_each_atom(f.left(), fn);
      for_each_atom(f.right(), fn);
      return;
  }
}

void for_each_term(const Formula& f, const std::function<void(const Term&)>& fn) {
  for_each_atom(f, [&](const Formula& a) {
    if (a.kind() == FormulaKind::Dvd) {
      fn(a.term());
    } else {
      fn(a.lhs());
      fn(a.rhs());
    }
  });
}

Formula substitute(const Formula& f, const std::string& v, const Term& by) {
  if (!f.mentions(v)) return f;
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Eq:
      return Formula::eq(substitute(f.lhs(), v, by), substitute(f.rhs(), v, by));
    case FormulaKind::Lt:
      return Formula::lt(substitute(f.lhs(), v, by), substitute(f.rhs(), v, by));
    case FormulaKind::Dvd:
      return Formula::dvd(f.modulus(), substitute(f.term(), v, by));
    case FormulaKind::Not:
      return Formula::negation(substitute(f.sub(), v, by));
    case FormulaKind::And:
      return Formula::conj(substitute(f.left(), v, by), substitute(f.right(), v, by));
    case FormulaKind::Or:
      return Formula::disj(substitute(f.left(), v, by), substitute(f.right(), v, by));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      std::string bv = f.var();
      Formula body = f.sub();
      if (by.mentions(bv)) {
        std::set<std::string> avoid = all_vars(body);
        collect_vars(by, avoid);
        avoid.insert(v);
        std::string renamed = fresh_name(bv, avoid);
        body = substitute(body, bv, Term::var(renamed));
        bv = renamed;
      }
      body = substitute(body, v, by);
      return f.kind() == FormulaKind::Exists ? Formula::exists(bv, body)
                                             : Formula::forall(bv, body);
    }
  }
  return f;
}

Formula replace_subterm(const Formula& f, const Term& from, const Term& to) {
  return map_terms(f, [&](const Term& t) { return replace_subterm(t, from, to); });
}

std::size_t lambda_depth(const std::string& x, const Formula& f) {
  std::size_t d = 0;
  for_each_term(f, [&](const Term& t) { d = std::max(d, lambda_depth(x, t)); });
  return d;
}

std::size_t div_lambda_depth(const Formula& f) {
  std::size_t d = 0;
  for_each_term(f, [&](const Term& t) { d = std::max(d, div_lambda_depth(t)); });
  return d;
}

bool is_quantifier_free(const Formula& f) { return !f.has_quantifier(); }

namespace {

std::size_t length_rec(const Formula& f, bool weight) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return 1;
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      return 1 + f.lhs().size() + f.rhs().size();
    case FormulaKind::Dvd:
      return (weight ? static_cast<std::size_t>(f.modulus()) : 1) + f.term().size();
    case FormulaKind::Not:
      return 1 + length_rec(f.sub(), weight);
    case FormulaKind::And:
    case FormulaKind::Or:
      return 1 + length_rec(f.left(), weight) + length_rec(f.right(), weight);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return 2 + length_rec(f.sub(), weight);
  }
  return 0;
}

}  // namespace

std::size_t formula_length(const Formula& f, bool weight_dn) { return length_rec(f, weight_dn); }

}  // namespace pow2qe
