#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pow2qe/rational.hpp"
#include "pow2qe/term.hpp"

namespace pow2qe {

/// Product of indeterminates with positive exponents, sorted by indeterminate.
/// Indeterminates are variables, rounding applications and opaque quotients.
using Monomial = std::vector<std::pair<Term, unsigned>>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

unsigned total_degree(const Monomial& m);

/// Sparse multivariate polynomial with rational coefficients. The zero
/// polynomial has no entries.
class Poly {
 public:
  using Map = std::map<Monomial, Rational, MonomialLess>;

  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly indeterminate(const Term& t);
  static Poly variable(const std::string& name) { return indeterminate(Term::var(name)); }
  static Poly monomial(const Monomial& m, const Rational& c);

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (0 if absent).
  Rational constant_value() const;
  /// Coefficient of the largest monomial; 0 for the zero polynomial.
  Rational leading_coefficient() const;
  bool is_single_monomial() const { return terms_.size() == 1; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  Poly pow(unsigned k) const;

  /// Degree in the variable `x` (0 when absent).
  unsigned degree(const std::string& x) const;
  /// Coefficient of x^k as a polynomial free of x.
  Poly coeff(const std::string& x, unsigned k) const;
  /// Coefficients c_0..c_deg in x.
  std::vector<Poly> coeffs(const std::string& x) const;
  static Poly from_coeffs(const std::string& x, const std::vector<Poly>& cs);
  Poly derivative(const std::string& x) const;
  /// True when x occurs, possibly inside an indeterminate.
  bool mentions(const std::string& x) const;
  /// True when x occurs inside some rounding or quotient indeterminate.
  bool mentions_opaquely(const std::string& x) const;

  /// Substitutes the polynomial `by` for the variable x (x must occur only
  /// as a plain variable).
  Poly substitute(const std::string& x, const Poly& by) const;

  /// The polynomial scaled so that its leading coefficient is 1, together
  /// with the sign of the original leading coefficient.
  std::pair<Poly, int> monic() const;
  /// Integer polynomial with coprime coefficients, scaled by a positive
  /// rational.
  Poly primitive() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Poly& a, const Poly& b);

 private:
  void add_term(const Monomial& m, const Rational& c);
  Map terms_;
};

/// Canonical polynomial of a term. Rounding applications are normalized
/// (ground ones evaluated, 2-adic content pulled out, products of rounding
/// values absorbed); quotients by nonzero constants are folded and other
/// quotients become opaque indeterminates.
Poly canon_poly(const Term& t);

/// Canonical term of a polynomial, monomials in descending order.
Term to_term(const Poly& p);

/// canon_poly followed by to_term.
Term canon_term(const Term& t);

/// A polynomial in the distinguished variable x with coefficients free of x.
struct PolyInX {
  std::string x;
  std::vector<Poly> coeffs;  // c_0 .. c_n, trailing zeros trimmed

  unsigned degree() const { return coeffs.empty() ? 0 : static_cast<unsigned>(coeffs.size() - 1); }
  bool is_zero() const { return coeffs.empty(); }
  const Poly& coeff(unsigned i) const;
  Term coeff_term(unsigned i) const { return pow2qe::to_term(coeff(i)); }
  Poly to_poly() const { return Poly::from_coeffs(x, coeffs); }
  Term to_term() const { return pow2qe::to_term(to_poly()); }
};

/// The view of p as a polynomial in x, or nullopt when x occurs inside a
/// rounding application or quotient.
std::optional<PolyInX> as_poly_in(const Poly& p, const std::string& x);

}  // namespace pow2qe
