#pragma once

#include <string>
#include <vector>

#include "pow2qe/case_split.hpp"
#include "pow2qe/context.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/poly.hpp"

namespace pow2qe {

/// For 0 < u < x <= 2^n u and A(x): x = 2 lambda(u) or ... or x = 2^n lambda(u).
Formula lambda_window(const Term& u, const std::string& x, long n);

/// For A(x): D_n(x) or D_n(2x) or ... or D_n(2^(n-1) x).
Formula dn_shift_cover(const std::string& x, long n);

enum class PolyMode { Inequality, Equality };

/// One clause of the rounding-of-a-polynomial case distinction.
///   first form:  lambda(p) = 2^r lambda(a_i) x^i          (value = right side)
///   second form: x^e = 2^r lambda(a_i)/lambda(-a_j), e = j - i > 0, or
///                x^e = 2^r lambda(-a_j)/lambda(a_i), e = i - j > 0 (value = right side)
struct LambdaClause {
  bool first_form = true;
  unsigned i = 0;
  unsigned j = 0;
  unsigned e = 0;
  long r = 0;
  Term value;
  Formula theta;
};

/// Clauses whose disjunction follows from A(x) and p > 0 (inequality mode)
/// or from A(x) and p = 0 (equality mode, second form only).
///
/// With `unit_factor`, equality mode covers p(x y) = 0 for any 1 <= y < 2
/// instead of p(x) = 0: the exponent windows widen by the degree gap.
std::vector<LambdaClause> lambda_poly_cases(const PolyInX& p, PolyMode mode,
                                            bool unit_factor = false);

/// Cases with results s x^i (s free of x, i <= deg p). Under A(x) and
/// p > 0 some guard holds, and each guard forces lambda(p) = s x^i.
CaseSplit<Term> lambda_poly_monomial(const PolyInX& p);

/// Removes x from the scope of every rounding application, assuming A(x).
Formula squeeze_lambda(const Formula& f, const std::string& x, QeContext* ctx = nullptr);

/// For A(x), p > 0 and lambda-depth 0: D_n(p) as a disjunction of
/// p = s x^i and D_n(s x^i).
Formula dn_poly_cases(const PolyInX& p, long n);

/// For A(x): D_n(s x^i) as a disjunction over r < n of D_n(2^r x) and
/// D_n(2^w s) with w = -r i mod n.
Formula dn_monomial_split(const Term& s, unsigned i, long n, const std::string& x);

/// An equivalent formula (given A(x)) that is simple in x.
Formula make_simple(const Formula& f, const std::string& x, QeContext* ctx = nullptr);

}  // namespace pow2qe
