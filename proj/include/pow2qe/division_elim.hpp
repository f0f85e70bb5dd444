#pragma once

#include "pow2qe/case_split.hpp"
#include "pow2qe/context.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/term.hpp"

namespace pow2qe {

/// For 0 < x and 0 < y: lambda(x/y) is lambda(x)/(2 lambda(y)) when
/// x lambda(y) < y lambda(x), and lambda(x)/lambda(y) otherwise.
CaseSplit<Term> rewrite_lambda_quotient(const Term& x, const Term& y);

/// A quotient of division-free terms.
struct Quotient {
  Term num;
  Term den;
  Term as_term() const { return Term::quotient(num, den); }
};

/// Cases whose guards cover every assignment; under each guard the term
/// equals num/den with den nonzero.
CaseSplit<Quotient> quotient_normal_form(const Term& t);

/// Removes division from the scope of every rounding application.
Formula clear_lambda_division(const Formula& f, QeContext* ctx = nullptr);

/// For A(x) and A(y): D_n(x/y) iff the returned disjunction over i < n of
/// D_n(2^i x) and D_n(2^i y).
Formula dn_of_quotient(long n, const Term& x, const Term& y);

/// An equivalent division-free formula.
Formula eliminate_division(const Formula& f, QeContext* ctx = nullptr);

}  // namespace pow2qe
