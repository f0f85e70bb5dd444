#pragma once

#include <optional>
#include <vector>

#include "pow2qe/poly.hpp"
#include "pow2qe/rational.hpp"

namespace pow2qe {

/// Dense univariate polynomial, coefficients from degree 0 upward, with no
/// trailing zeros (the zero polynomial is empty).
using UPoly = std::vector<Rational>;

void trim(UPoly& p);
int udegree(const UPoly& p);  // -1 for zero
Rational ueval(const UPoly& p, const Rational& x);
UPoly uadd(const UPoly& a, const UPoly& b);
UPoly usub(const UPoly& a, const UPoly& b);
UPoly umul(const UPoly& a, const UPoly& b);
UPoly uderiv(const UPoly& p);
/// Quotient and remainder of a by b (b nonzero).
std::pair<UPoly, UPoly> udivmod(const UPoly& a, const UPoly& b);
/// Monic gcd (zero when both are zero).
UPoly ugcd(UPoly a, UPoly b);
/// p divided by gcd(p, p').
UPoly squarefree(const UPoly& p);

/// The univariate polynomial of a Poly in x alone, or nullopt when other
/// indeterminates occur.
std::optional<UPoly> to_upoly(const Poly& p, const std::string& x);

std::vector<UPoly> sturm_sequence(const UPoly& p);
/// Number of distinct real roots of p in the half-open interval (a, b].
int count_roots(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b);
/// Number of distinct real roots of p.
int count_real_roots(const UPoly& p);

/// An isolated real root of a square-free polynomial: either exact (lo == hi)
/// or the unique root in the open interval (lo, hi) with dyadic endpoints.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};

/// A power of two strictly larger than the absolute value of every root.
Rational root_bound(const UPoly& p);

/// Isolating intervals for the distinct real roots of p, in increasing order.
std::vector<RootInterval> isolate_roots(const UPoly& p);

/// Halves the interval around the root of the square-free polynomial sf.
void refine(const UPoly& sf, RootInterval& r);

/// The sign of q at the root of sf isolated by r.
int sign_at_root(const UPoly& sf, RootInterval r, const UPoly& q);

/// The rational roots of p, in increasing order.
std::vector<Rational> rational_roots(const UPoly& p);

}  // namespace pow2qe
