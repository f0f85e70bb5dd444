#pragma once

#include <map>
#include <string>
#include <vector>

#include "pow2qe/context.hpp"
#include "pow2qe/formula.hpp"

namespace pow2qe {

/// Maximal non-field subterms (rounding applications, quotients) replaced
/// by fresh parameter names.
struct ParamAbstraction {
  std::map<std::string, Term> params;  // name -> original term
  std::vector<std::string> order;      // names in creation order

  Term restore(const Term& t) const;
  Formula restore(const Formula& f) const;
};

struct Abstracted {
  Formula formula;
  ParamAbstraction abstraction;
};

/// Replaces rounding and quotient subterms by parameters. Throws
/// ContractError when a bound variable occurs under a rounding, a quotient
/// or a D_n atom, or when a D_n atom remains (callers split those first).
Abstracted abstract_params(const Formula& f, QeContext* ctx = nullptr);

/// True when f uses only 0, 1, numerals, +, -, *, = and < besides the
/// connectives and quantifiers.
bool is_ordered_field(const Formula& f);

/// Quantifier elimination for real closed fields. Free variables act as
/// parameters. Throws GuardrailError on the degree and cell caps.
Formula qe_rcf(const Formula& f, QeContext* ctx = nullptr);

/// Truth over the reals of an ordered-field sentence.
bool decide_rcf_sentence(const Formula& f, QeContext* ctx = nullptr);

/// qe_rcf for formulas whose bound variables occur only in field positions.
/// Each disjunct is split into the literals free of the quantified variable,
/// kept as they are, and the rest, abstracted and handed to qe_rcf.
Formula qe_rcf_with_params(const Formula& f, QeContext* ctx = nullptr);

}  // namespace pow2qe
