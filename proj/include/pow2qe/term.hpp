#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "pow2qe/rational.hpp"

namespace pow2qe {

enum class TermKind : std::uint8_t { Var, Const, Pow2, Add, Sub, Mul, Div, Lambda };

struct TermNode;

/// Immutable first-order term over 0, 1, +, -, *, /, the rounding function
/// and power-of-two literals. Copies share structure.
class Term {
 public:
  /// The constant 0.
  Term();

  static Term var(std::string name);
  static Term constant(Rational value);
  static Term constant(long value);
  /// 2^k; exponents 0 and 1 collapse to the constants 1 and 2.
  static Term pow2(long exponent);
  static Term sum(Term a, Term b);
  static Term difference(Term a, Term b);
  static Term product(Term a, Term b);
  static Term quotient(Term a, Term b);
  static Term lambda(Term a);

  TermKind kind() const;
  const std::string& name() const;
  const Rational& value() const;
  long exponent() const;
  const Term& lhs() const;
  const Term& rhs() const;
  const Term& arg() const;

  bool is_var() const { return kind() == TermKind::Var; }
  bool is_var(const std::string& n) const { return is_var() && name() == n; }
  /// Const or Pow2 node.
  bool is_numeral() const;
  /// Value of a Const or Pow2 node.
  Rational numeral_value() const;
  bool is_zero() const;

  std::size_t hash() const;
  /// Node count.
  std::size_t size() const;
  bool has_division() const;
  bool has_lambda() const;
  /// True when the variable occurs in the term.
  bool mentions(const std::string& var) const;
  bool is_ground() const;

  const TermNode* node() const { return node_.get(); }

 private:
  friend struct TermNode;
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

int compare(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline std::strong_ordering operator<=>(const Term& a, const Term& b) {
  return compare(a, b) <=> 0;
}

inline Term operator+(Term a, Term b) { return Term::sum(std::move(a), std::move(b)); }
inline Term operator-(Term a, Term b) { return Term::difference(std::move(a), std::move(b)); }
inline Term operator*(Term a, Term b) { return Term::product(std::move(a), std::move(b)); }
inline Term operator/(Term a, Term b) { return Term::quotient(std::move(a), std::move(b)); }

/// x^k as a left-nested product (k = 0 gives 1).
Term power(const Term& x, unsigned k);

void collect_vars(const Term& t, std::set<std::string>& out);
std::set<std::string> free_vars(const Term& t);

/// Replaces every occurrence of variable `var` by `by`.
Term substitute(const Term& t, const std::string& var, const Term& by);

/// Replaces every occurrence of the subterm `from` by `to` (outermost first).
Term replace_subterm(const Term& t, const Term& from, const Term& to);

/// Lambda-depth of `x` in `t`: nesting count of rounding applications above x.
std::size_t lambda_depth(const std::string& x, const Term& t);

/// Lambda-depth of the division symbol in `t`.
std::size_t div_lambda_depth(const Term& t);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace pow2qe
