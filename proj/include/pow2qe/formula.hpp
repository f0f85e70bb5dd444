#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pow2qe/term.hpp"

namespace pow2qe {

enum class FormulaKind : std::uint8_t {
  True,
  False,
  Eq,      // t1 = t2
  Lt,      // t1 < t2
  Dvd,     // D_n(t); A(t) is D_1(t)
  Not,
  And,
  Or,
  Exists,
  Forall
};

struct FormulaNode;

/// Immutable first-order formula in the language with = , <, D_n and the
/// usual connectives. Copies share structure.
class Formula {
 public:
  /// The formula `true`.
  Formula();

  static Formula truth();
  static Formula falsity();
  static Formula boolean(bool b) { return b ? truth() : falsity(); }
  static Formula eq(Term a, Term b);
  static Formula lt(Term a, Term b);
  /// D_n(t). Throws std::invalid_argument when n < 1.
  static Formula dvd(long n, Term t);
  /// A(t), stored as D_1(t).
  static Formula pow2_pred(Term t) { return dvd(1, std::move(t)); }
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  // Surface sugar, desugared on construction.
  static Formula le(Term a, Term b) { return negation(lt(std::move(b), std::move(a))); }
  static Formula gt(Term a, Term b) { return lt(std::move(b), std::move(a)); }
  static Formula ge(Term a, Term b) { return negation(lt(std::move(a), std::move(b))); }
  static Formula ne(Term a, Term b) { return negation(eq(std::move(a), std::move(b))); }
  static Formula implies(Formula a, Formula b) { return disj(negation(std::move(a)), std::move(b)); }
  static Formula iff(Formula a, Formula b);

  FormulaKind kind() const;
  bool is_atom() const;
  bool is_literal() const;
  bool is_quantifier() const;
  bool is_true() const { return kind() == FormulaKind::True; }
  bool is_false() const { return kind() == FormulaKind::False; }

  const Term& lhs() const;       // Eq, Lt
  const Term& rhs() const;       // Eq, Lt
  long modulus() const;          // Dvd
  const Term& term() const;      // Dvd
  const Formula& sub() const;    // Not, Exists, Forall
  const Formula& left() const;   // And, Or
  const Formula& right() const;  // And, Or
  const std::string& var() const;  // Exists, Forall

  std::size_t hash() const;
  std::size_t size() const;
  bool mentions(const std::string& var) const;
  bool has_quantifier() const;
  bool has_division() const;
  bool has_lambda() const;

  const FormulaNode* node() const { return node_.get(); }

 private:
  friend struct FormulaNode;
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

int compare(const Formula& a, const Formula& b);
inline bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

/// Left-nested conjunction / disjunction; empty lists give true / false.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

/// Top-level conjuncts / disjuncts, flattening nested And / Or.
std::vector<Formula> conjuncts(const Formula& f);
std::vector<Formula> disjuncts(const Formula& f);

std::set<std::string> free_vars(const Formula& f);
/// Every variable name occurring free or bound.
std::set<std::string> all_vars(const Formula& f);

/// Capture-avoiding substitution of `by` for the free occurrences of `var`.
Formula substitute(const Formula& f, const std::string& var, const Term& by);

/// Replaces every occurrence of the term `from` inside atoms by `to`.
Formula replace_subterm(const Formula& f, const Term& from, const Term& to);

/// Rebuilds the formula with each atom replaced by `fn(atom)`.
Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn);

/// Applies `fn` to every term argument of every atom.
Formula map_terms(const Formula& f, const std::function<Term(const Term&)>& fn);

/// Calls `fn` on every term argument of every atom.
void for_each_term(const Formula& f, const std::function<void(const Term&)>& fn);

/// Calls `fn` on every atom.
void for_each_atom(const Formula& f, const std::function<void(const Formula&)>& fn);

std::size_t lambda_depth(const std::string& x, const Formula& f);
std::size_t div_lambda_depth(const Formula& f);
bool is_quantifier_free(const Formula& f);

/// Formula length counting each D_n as n symbols (weighted) or as one symbol.
std::size_t formula_length(const Formula& f, bool weight_dn);

/// A name starting with `base` that is not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace pow2qe
