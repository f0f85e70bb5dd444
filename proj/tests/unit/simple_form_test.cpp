// Finite disjunctions and the reduction to simple form.

#include <gtest/gtest.h>

#include "pow2qe/evaluator.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/poly.hpp"
#include "pow2qe/simple_form.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

Formula F(const char* s) { return parse_formula(s); }

PolyInX poly(const char* s) { return *as_poly_in(canon_poly(parse_term(s)), "x"); }

bool at(const Formula& f, const Rational& x) { return eval_qf(f, {{"x", x}}); }

// Truth of both formulas agrees at x = 2^t for every t in [lo, hi].
void expect_equivalent_on_powers(const Formula& a, const Formula& b, long lo, long hi) {
  for (long t = lo; t <= hi; ++t) EXPECT_EQ(at(a, pow2(t)), at(b, pow2(t))) << "x = 2^" << t;
}

}  // namespace

TEST(LambdaWindow, PowersAboveThree) {
  Formula w = lambda_window(Term::constant(3), "x", 2);
  for (long t = -2; t <= 6; ++t) {
    Rational x = pow2(t);
    bool in_interval = x > 3 && x <= 12;
    if (in_interval) EXPECT_TRUE(at(w, x)) << t;
  }
  EXPECT_TRUE(at(w, Rational(4)));
  EXPECT_TRUE(at(w, Rational(8)));
  EXPECT_FALSE(at(w, Rational(16)));
}

TEST(LambdaWindow, SinglePower) {
  Formula w = lambda_window(Term::constant(3), "x", 1);
  EXPECT_TRUE(at(w, Rational(4)));
  EXPECT_FALSE(at(w, Rational(8)));
}

TEST(LambdaWindow, UnitBase) {
  Formula w = lambda_window(Term::constant(1), "x", 1);
  EXPECT_TRUE(at(w, Rational(2)));
  EXPECT_FALSE(at(w, Rational(1)));
}

TEST(DnShiftCover, Examples) {
  EXPECT_TRUE(at(dn_shift_cover("x", 3), Rational(2)));
  EXPECT_TRUE(at(dn_shift_cover("x", 2), Rational(1)));
  EXPECT_TRUE(at(dn_shift_cover("x", 2), Rational(1, 2)));
}

TEST(DnShiftCover, CoversEveryPower) {
  for (long n = 1; n <= 6; ++n) {
    Formula c = dn_shift_cover("x", n);
    for (long t = -12; t <= 12; ++t) EXPECT_TRUE(at(c, pow2(t))) << n << " " << t;
    EXPECT_FALSE(at(c, Rational(3)));
  }
}

TEST(LambdaPolyCases, LinearInequality) {
  auto cs = lambda_poly_cases(poly("x + 1"), PolyMode::Inequality);
  for (long t = -8; t <= 8; ++t) {
    bool some = false;
    for (const auto& c : cs) some = some || at(c.theta, pow2(t));
    EXPECT_TRUE(some) << t;
  }
  bool first_at_four = false;
  for (const auto& c : cs)
    if (c.first_form && c.i == 1 && c.r == 0 && at(c.theta, Rational(4))) first_at_four = true;
  EXPECT_TRUE(first_at_four);
}

TEST(LambdaPolyCases, EqualityModeAtRoot) {
  auto cs = lambda_poly_cases(poly("x - 1"), PolyMode::Equality);
  bool some = false;
  for (const auto& c : cs) {
    EXPECT_FALSE(c.first_form);
    some = some || at(c.theta, Rational(1));
  }
  EXPECT_TRUE(some);
}

TEST(LambdaPolyCases, Constant) {
  auto cs = lambda_poly_cases(poly("3"), PolyMode::Inequality);
  ASSERT_FALSE(cs.empty());
  for (const auto& c : cs) {
    EXPECT_TRUE(c.first_form);
    EXPECT_EQ(c.i, 0u);
  }
  bool some = false;
  for (const auto& c : cs)
    if (at(c.theta, Rational(1))) {
      some = true;
      EXPECT_EQ(eval_term(c.value, {{"x", Rational(1)}}), 2);
    }
  EXPECT_TRUE(some);
}

TEST(LambdaPolyMonomial, GuardsSelectTheRounding) {
  for (const char* p : {"x + 1", "x*x", "3*x*x - x + 1/2", "5"}) {
    auto cs = lambda_poly_monomial(poly(p));
    Term pt = parse_term(p);
    for (long t = -8; t <= 8; ++t) {
      Assignment s{{"x", pow2(t)}};
      if (eval_term(pt, s) <= 0) continue;
      bool some = false;
      for (const auto& c : cs)
        if (eval_qf(c.guard, s)) {
          some = true;
          EXPECT_EQ(eval_term(c.result, s), lambda_of(eval_term(pt, s))) << p << " at 2^" << t;
        }
      EXPECT_TRUE(some) << p << " at 2^" << t;
    }
  }
}

TEST(LambdaPolyMonomial, SquareAtEight) {
  auto cs = lambda_poly_monomial(poly("x*x"));
  Assignment s{{"x", Rational(8)}};
  for (const auto& c : cs)
    if (eval_qf(c.guard, s)) EXPECT_EQ(eval_term(c.result, s), 64);
}

TEST(SqueezeLambda, LinearArgument) {
  Formula f = F("L(x + 1) > x");
  Formula g = squeeze_lambda(f, "x");
  EXPECT_EQ(lambda_depth("x", g), 0u);
  expect_equivalent_on_powers(f, g, -10, 10);
}

TEST(SqueezeLambda, NoRoundingUnchanged) {
  Formula f = F("x*x > 2 and L(y) < x");
  EXPECT_EQ(lambda_depth("x", squeeze_lambda(f, "x")), 0u);
  Formula h = F("x > 2");
  EXPECT_EQ(squeeze_lambda(h, "x"), simplify(h));
}

TEST(SqueezeLambda, NestedRounding) {
  Formula f = F("L(L(x) + 1) = 2*x");
  Formula g = squeeze_lambda(f, "x");
  EXPECT_EQ(lambda_depth("x", g), 0u);
  expect_equivalent_on_powers(f, g, -10, 10);
}

TEST(DnPolyCases, Examples) {
  EXPECT_FALSE(at(dn_poly_cases(poly("x + 1"), 2), Rational(1)));
  EXPECT_TRUE(at(dn_poly_cases(poly("x*x"), 2), Rational(2)));
  Formula d1 = dn_poly_cases(poly("x"), 1);
  for (long t = -4; t <= 4; ++t) EXPECT_TRUE(at(d1, pow2(t)));
}

TEST(DnPolyCases, AgreesWithDivisibility) {
  for (const char* p : {"x + 1", "x*x", "2*x*x + x", "x/4 + 3"})
    for (long n : {1, 2, 3}) {
      Formula lhs = Formula::dvd(n, parse_term(p));
      Formula rhs = dn_poly_cases(poly(p), n);
      expect_equivalent_on_powers(lhs, rhs, -8, 8);
    }
}

TEST(DnMonomialSplit, Examples) {
  Formula f = dn_monomial_split(Term::constant(2), 1, 2, "x");
  expect_equivalent_on_powers(F("D[2](2*x)"), f, -8, 8);
  EXPECT_TRUE(at(f, Rational(2)));
  Formula g = dn_monomial_split(Term::constant(5), 2, 1, "x");
  expect_equivalent_on_powers(F("D[1](5*x*x)"), g, -4, 4);
  Formula h = dn_monomial_split(Term::constant(1), 2, 3, "x");
  expect_equivalent_on_powers(F("D[3](x*x)"), h, -9, 9);
  EXPECT_FALSE(at(h, Rational(2)));
}

TEST(MakeSimple, LargeShift) {
  Formula f = F("D[2](4*x)");
  Formula g = make_simple(f, "x");
  EXPECT_TRUE(is_simple_in("x", g));
  expect_equivalent_on_powers(f, g, -10, 10);
}

TEST(MakeSimple, AlreadySimple) {
  Formula f = F("x*x > 2");
  Formula g = make_simple(f, "x");
  EXPECT_TRUE(is_simple_in("x", g));
  expect_equivalent_on_powers(f, g, -10, 10);
}

TEST(MakeSimple, RoundingAndDivisibility) {
  Formula f = F("L(x)*x = x*x and D[3](2*x*x*x)");
  Formula g = make_simple(f, "x");
  EXPECT_TRUE(is_simple_in("x", g));
  expect_equivalent_on_powers(f, g, -10, 10);
}
