#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pow2qe/formula.hpp"
#include "pow2qe/poly.hpp"

namespace pow2qe {

using Clause = std::vector<Formula>;

inline constexpr std::size_t kDefaultDnfCap = 10'000'000;

/// Negation normal form: negations only directly above atoms.
Formula nnf(const Formula& f);

/// Disjunctive normal form of a quantifier-free formula as a list of clauses
/// of literals, in construction order. Contradictory clauses are dropped.
/// Throws BlowupError when the literal count passes `cap`.
std::vector<Clause> dnf_clauses(const Formula& f, std::size_t cap = kDefaultDnfCap);

/// As dnf_clauses, but any subformula for which `leaf` holds is kept whole
/// as a single literal.
std::vector<Clause> dnf_clauses(const Formula& f, const std::function<bool(const Formula&)>& leaf,
                                std::size_t cap = kDefaultDnfCap);

Formula to_dnf(const Formula& f, std::size_t cap = kDefaultDnfCap);
Formula from_clauses(const std::vector<Clause>& clauses);

/// Rewrites to a negation-free combination of p = 0, 0 < q, D_n(t) and
/// not D_n(t), with p and q canonical polynomials in x.
Formula normalize_atoms(const Formula& f, const std::string& x);

/// True when every atom mentioning x is p = 0 or 0 < q with x not under a
/// rounding or quotient, and every D_n atom mentioning x is D_n(2^r x) with
/// 0 <= r < n.
bool is_simple_in(const std::string& x, const Formula& f);

/// The shift r when t is x or 2^r x with r >= 0.
std::optional<long> shift_of(const Term& t, const std::string& x);

/// D_n(2^r x) with the shift reduced into [0, n).
Formula dn_shift_atom(long n, long r, const std::string& x);

/// Canonical form of an atom; may return a compound formula when a rounding
/// product is split into sign conditions.
Formula canon_atom(const Formula& atom);

/// Sound constant folding, canonical atoms, flattening, stable duplicate
/// removal and complementary-literal detection. Idempotent.
Formula simplify(const Formula& f);

/// Drops literals that the sign conditions of enclosing conjunctions, or
/// of sibling literal disjuncts, already decide.
Formula prune_by_signs(const Formula& f);

/// Left-nested conjunction / disjunction with constant folding and stable
/// deduplication of the (already flattened) list.
Formula mk_and(const std::vector<Formula>& fs);
Formula mk_or(const std::vector<Formula>& fs);

}  // namespace pow2qe
