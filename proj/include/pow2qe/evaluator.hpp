#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "pow2qe/formula.hpp"
#include "pow2qe/rational.hpp"
#include "pow2qe/term.hpp"

namespace pow2qe {

using Assignment = std::map<std::string, Rational>;

/// Exact value of a term. Rounding follows the model (largest power of two
/// not above a positive argument, 0 otherwise) and x / 0 = 0. Throws
/// ContractError on an unassigned variable.
Rational eval_term(const Term& t, const Assignment& s);

/// True iff v = 2^k for an integer k divisible by n.
bool dn_holds(long n, const Rational& v);

/// Truth of a quantifier-free formula. Throws ContractError on quantifiers.
bool eval_qf(const Formula& f, const Assignment& s);

/// Truth of a quantifier-free sentence.
bool decide_ground_sentence(const Formula& f);

struct WitnessBudget {
  long min_exponent = -64;
  long max_exponent = 64;
  long max_mantissa = 1L << 16;  // odd mantissas up to this bound
  std::size_t max_evaluations = 200'000;
};

/// A value v with eval_qf(f, s[x := v]) true, searched over roots of the
/// polynomial atoms and their midpoints, then over +-m 2^k. Absence of a
/// result is inconclusive.
std::optional<Rational> witness_search(const Formula& f, const std::string& x,
                                       const Assignment& s, const WitnessBudget& budget = {});

}  // namespace pow2qe
