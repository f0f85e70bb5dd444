#include "pow2qe/term.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pow2qe {

struct TermNode {
  TermKind kind = TermKind::Const;
  std::string name;
  Rational value;
  long exponent = 0;
  Term a{nullptr};
  Term b{nullptr};
  std::size_t hash = 0;
  std::size_t size = 1;
  std::uint64_t var_mask = 0;
  bool has_div = false;
  bool has_lambda = false;
};

namespace {

std::uint64_t name_bit(const std::string& n) {
  return std::uint64_t{1} << (std::hash<std::string>{}(n) % 64);
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::shared_ptr<const TermNode>& zero_node() {
  static const auto node = [] {
    auto n = std::make_shared<TermNode>();
    n->value = 0;
    n->hash = mix(static_cast<std::size_t>(TermKind::Const), hash_value(n->value));
    return std::shared_ptr<const TermNode>(n);
  }();
  return node;
}

}  // namespace

Term::Term() : node_(zero_node()) {}

Term Term::var(std::string name) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Var;
  n->var_mask = name_bit(name);
  n->hash = mix(static_cast<std::size_t>(TermKind::Var), std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::constant(Rational value) {
  value.canonicalize();
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Const;
  n->hash = mix(static_cast<std::size_t>(TermKind::Const), hash_value(value));
  n->value = std::move(value);
  return Term(std::move(n));
}

Term Term::constant(long value) { return constant(Rational(value)); }

Term Term::pow2(long exponent) {
  if (exponent == 0) return constant(1);
  if (exponent == 1) return constant(2);
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Pow2;
  n->exponent = exponent;
  n->hash = mix(static_cast<std::size_t>(TermKind::Pow2), std::hash<long>{}(exponent));
  return Term(std::move(n));
}

namespace {

std::shared_ptr<TermNode> binary(TermKind kind, Term a, Term b) {
  auto n = std::make_shared<TermNode>();
  n->kind = kind;
  n->hash = mix(mix(static_cast<std::size_t>(kind), a.hash()), b.hash());
  n->size = 1 + a.size() + b.size();
  n->var_mask = a.node()->var_mask | b.node()->var_mask;
  n->has_div = kind == TermKind::Div || a.has_division() || b.has_division();
  n->has_lambda = a.has_lambda() || b.has_lambda();
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

Term Term::sum(Term a, Term b) { return Term(binary(TermKind::Add, std::move(a), std::move(b))); }
Term Term::difference(Term a, Term b) {
  return Term(binary(TermKind::Sub, std::move(a), std::move(b)));
}
Term Term::product(Term a, Term b) {
  return Term(binary(TermKind::Mul, std::move(a), std::move(b)));
}
Term Term::quotient(Term a, Term b) {
  return Term(binary(TermKind::Div, std::move(a), std::move(b)));
}

Term Term::lambda(Term a) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Lambda;
  n->hash = mix(static_cast<std::size_t>(TermKind::Lambda), a.hash());
  n->size = 1 + a.size();
  n->var_mask = a.node()->var_mask;
  n->has_div = a.has_division();
  n->has_lambda = true;
  n->a = std::move(a);
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Rational& Term::value() const { return node_->value; }
long Term::exponent() const { return node_->exponent; }
const Term& Term::lhs() const { return node_->a; }
const Term& Term::rhs() const { return node_->b; }
const Term& Term::arg() const { return node_->a; }

bool Term::is_numeral() const {
  return kind() == TermKind::Const || kind() == TermKind::Pow2;
}

Rational Term::numeral_value() const {
  if (kind() == TermKind::Const) return value();
  if (kind() == TermKind::Pow2) return pow2qe::pow2(exponent());
  throw std::logic_error("numeral_value of a non-numeral term");
}

bool Term::is_zero() const { return kind() == TermKind::Const && sgn(value()) == 0; }

std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
bool Term::has_division() const { return node_->has_div; }
bool Term::has_lambda() const { return node_->has_lambda; }
bool Term::is_ground() const { return node_->var_mask == 0; }

bool Term::mentions(const std::string& var) const {
  if ((node_->var_mask & name_bit(var)) == 0) return false;
  switch (kind()) {
    case TermKind::Var:
      return name() == var;
    case TermKind::Const:
    case TermKind::Pow2:
      return false;
    case TermKind::Lambda:
      return arg().mentions(var);
    default:
      return lhs().mentions(var) || rhs().mentions(var);
  }
}

int compare(const Term& a, const Term& b) {
  if (a.node() == b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case TermKind::Var:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case TermKind::Const:
      return cmp(a.value(), b.value()) < 0 ? -1 : (a.value() == b.value() ? 0 : 1);
    case TermKind::Pow2:
      return a.exponent() < b.exponent() ? -1 : (a.exponent() == b.exponent() ? 0 : 1);
    case TermKind::Lambda:
      return compare(a.arg(), b.arg());
    default: {
      if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
      int c = compare(a.lhs(), b.lhs());
      if (c != 0) return c;
      return compare(a.rhs(), b.rhs());
    }
  }
}

Term power(const Term& x, unsigned k) {
  if (k == 0) return Term::constant(1);
  Term out = x;
  for (unsigned i = 1; i < k; ++i) out = out * x;
  return out;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_ground()) return;
  switch (t.kind()) {
    case TermKind::Var:
      out.insert(t.name());
      return;
    case TermKind::Const:
    case TermKind::Pow2:
      return;
    case TermKind::Lambda:
      collect_vars(t.arg(), out);
      return;
    default:
      collect_vars(t.lhs(), out);
      collect_vars(t.rhs(), out);
  }
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

namespace {

Term rebuild(const Term& t, Term a, Term b) {
  switch (t.kind()) {
    case TermKind::Add:
      return Term::sum(std::move(a), std::move(b));
    case TermKind::Sub:
      return Term::difference(std::move(a), std::move(b));
    case TermKind::Mul:
      return Term::product(std::move(a), std::move(b));
    case TermKind::Div:
      return Term::quotient(std::move(a), std::move(b));
    default:
      throw std::logic_error("rebuild of a non-binary term");
  }
}

}  // namespace

Term substitute(const Term& t, const std::string& var, const Term& by) {
  if (!t.mentions(var)) return t;
  switch (t.kind()) {
    case TermKind::Var:
      return by;
    case TermKind::Lambda:
      return Term::lambda(substitute(t.arg(), var, by));
    default:
      return rebuild(t, substitute(t.lhs(), var, by), substitute(t.rhs(), var, by));
  }
}

Term replace_subterm(const Term& t, const Term& from, const Term& to) {
  if (t.size() < from.size()) return t;
  if (t.hash() == from.hash() && t == from) return to;
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::Pow2:
      return t;
    case TermKind::Lambda: {
      Term a = replace_subterm(t.arg(), from, to);
      if (a.node() == t.arg().node()) return t;
      return Term::lambda(std::move(a));
    }
    default: {
      Term a = replace_subterm(t.lhs(), from, to);
      Term b = replace_subterm(t.rhs(), from, to);
      if (a.node() == t.lhs().node() && b.node() == t.rhs().node()) return t;
      return rebuild(t, std::move(a), std::move(b));
    }
  }
}

std::size_t lambda_depth(const std::string& x, const Term& t) {
  if (!t.has_lambda() || !t.mentions(x)) return 0;
  switch (t.kind()) {
    case TermKind::Lambda:
      return lambda_depth(x, t.arg()) + 1;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
      return std::max(lambda_depth(x, t.lhs()), lambda_depth(x, t.rhs()));
    default:
      return 0;
  }
}

std::size_t div_lambda_depth(const Term& t) {
  if (!t.has_lambda() || !t.has_division()) return 0;
  switch (t.kind()) {
    case TermKind::Lambda:
      return div_lambda_depth(t.arg()) + 1;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
      return std::max(div_lambda_depth(t.lhs()), div_lambda_depth(t.rhs()));
    default:
      return 0;
  }
}

}  // namespace pow2qe
