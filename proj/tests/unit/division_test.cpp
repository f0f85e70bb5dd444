// Rounded quotients and division elimination.

#include <gtest/gtest.h>

#include "pow2qe/division_elim.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

Formula F(const char* s) { return parse_formula(s); }
Term T(const char* s) { return parse_term(s); }

const std::vector<Rational>& grid() {
  static const std::vector<Rational> g = {Rational(-3),   Rational(-1, 2), Rational(0),    Rational(1, 3),
                                          Rational(1, 2), Rational(1),     Rational(3, 2), Rational(2),
                                          Rational(3),    Rational(5),     Rational(8),    Rational(12)};
  return g;
}

void expect_equivalent_xyz(const Formula& a, const Formula& b) {
  for (const auto& x : grid())
    for (const auto& y : grid())
      for (const auto& z : {Rational(-1), Rational(0), Rational(2)}) {
        Assignment s{{"x", x}, {"y", y}, {"z", z}};
        ASSERT_EQ(eval_qf(a, s), eval_qf(b, s)) << "x=" << to_string(x) << " y=" << to_string(y);
      }
}

// The result of the unique case whose guard holds, evaluated.
template <class R, class V>
Rational chosen(const CaseSplit<R>& cs, const Assignment& s, V value) {
  std::optional<Rational> out;
  for (const auto& c : cs)
    if (eval_qf(c.guard, s)) {
      Rational v = value(c.result);
      if (out) EXPECT_EQ(*out, v);
      out = v;
    }
  EXPECT_TRUE(out.has_value());
  return out.value_or(Rational(0));
}

}  // namespace

TEST(RewriteLambdaQuotient, FiveThirds) {
  auto cs = rewrite_lambda_quotient(Term::constant(5), Term::constant(3));
  EXPECT_EQ(chosen(cs, {}, [](const Term& t) { return eval_term(t, {}); }), 1);
  EXPECT_EQ(lambda_of(Rational(5, 3)), 1);
}

TEST(RewriteLambdaQuotient, SixThirds) {
  auto cs = rewrite_lambda_quotient(Term::constant(6), Term::constant(3));
  EXPECT_EQ(chosen(cs, {}, [](const Term& t) { return eval_term(t, {}); }), 2);
}

TEST(RewriteLambdaQuotient, Identity) {
  auto cs = rewrite_lambda_quotient(Term::constant(1), Term::constant(1));
  EXPECT_EQ(chosen(cs, {}, [](const Term& t) { return eval_term(t, {}); }), 1);
}

TEST(RewriteLambdaQuotient, AgreesWithRoundingOnPositives) {
  auto cs = rewrite_lambda_quotient(Term::var("x"), Term::var("y"));
  for (const auto& x : grid())
    for (const auto& y : grid()) {
      if (x <= 0 || y <= 0) continue;
      Assignment s{{"x", x}, {"y", y}};
      EXPECT_EQ(chosen(cs, s, [&](const Term& t) { return eval_term(t, s); }), lambda_of(x / y));
    }
}

TEST(QuotientNormalForm, SumOfQuotients) {
  auto cs = quotient_normal_form(T("a/b + c/d"));
  for (const auto& a : {Rational(1), Rational(-2, 3)})
    for (const auto& b : grid())
      for (const auto& d : grid()) {
        Assignment s{{"a", a}, {"b", b}, {"c", Rational(5)}, {"d", d}};
        Rational want = eval_term(T("a/b + c/d"), s);
        EXPECT_EQ(chosen(cs, s, [&](const Quotient& q) { return eval_term(q.as_term(), s); }), want);
        for (const auto& c : cs)
          if (eval_qf(c.guard, s)) EXPECT_NE(eval_term(c.result.den, s), 0);
      }
}

TEST(QuotientNormalForm, DivisionFree) {
  auto cs = quotient_normal_form(T("a + b"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(cs[0].guard.is_true());
  EXPECT_EQ(eval_term(cs[0].result.den, {}), 1);
}

TEST(QuotientNormalForm, RoundedQuotient) {
  auto cs = quotient_normal_form(T("L(a/b)"));
  EXPECT_GE(cs.size(), 2u);
  for (const auto& c : cs) {
    EXPECT_FALSE(c.result.num.has_division());
    EXPECT_FALSE(c.result.den.has_division());
  }
  for (const auto& a : grid())
    for (const auto& b : grid()) {
      Assignment s{{"a", a}, {"b", b}};
      EXPECT_EQ(chosen(cs, s, [&](const Quotient& q) { return eval_term(q.as_term(), s); }),
                eval_term(T("L(a/b)"), s));
    }
}

TEST(ClearLambdaDivision, SingleQuotient) {
  Formula f = F("L(x/y) = 1");
  Formula g = clear_lambda_division(f);
  EXPECT_EQ(div_lambda_depth(g), 0u);
  expect_equivalent_xyz(f, g);
}

TEST(ClearLambdaDivision, DepthZeroUnchanged) {
  Formula f = F("L(x) + y/z = 0");
  EXPECT_EQ(clear_lambda_division(f), f);
}

TEST(ClearLambdaDivision, Nested) {
  Formula f = F("L(L(x/y)) = 1");
  Formula g = clear_lambda_division(f);
  EXPECT_EQ(div_lambda_depth(g), 0u);
  expect_equivalent_xyz(f, g);
}

TEST(DnOfQuotient, GroundInstances) {
  struct Row { long x, y; };
  for (Row r : {Row{8, 2}, Row{16, 4}, Row{2, 2}}) {
    Formula rhs = dn_of_quotient(2, Term::constant(r.x), Term::constant(r.y));
    EXPECT_TRUE(decide_ground_sentence(rhs)) << r.x << "/" << r.y;
    EXPECT_TRUE(dn_holds(2, Rational(r.x) / r.y));
  }
}

TEST(DnOfQuotient, AgreesOverPowers) {
  for (long n : {1, 2, 3, 4})
    for (long i = -6; i <= 6; ++i)
      for (long j = -6; j <= 6; ++j) {
        Formula rhs = dn_of_quotient(n, Term::pow2(i), Term::pow2(j));
        EXPECT_EQ(decide_ground_sentence(rhs), dn_holds(n, pow2(i) / pow2(j))) << n << " " << i << " " << j;
      }
}

TEST(EliminateDivision, SignSplit) {
  Formula f = F("x/y > 1");
  Formula g = eliminate_division(f);
  EXPECT_FALSE(g.has_division());
  expect_equivalent_xyz(f, g);
}

TEST(EliminateDivision, DivisibilityOfQuotient) {
  Formula f = F("A(x) and A(y) and D[2](x/y)");
  Formula g = eliminate_division(f);
  EXPECT_FALSE(g.has_division());
  for (long i = -5; i <= 5; ++i)
    for (long j = -5; j <= 5; ++j) {
      Assignment s{{"x", pow2(i)}, {"y", pow2(j)}, {"z", Rational(0)}};
      EXPECT_EQ(eval_qf(f, s), eval_qf(g, s));
    }
  expect_equivalent_xyz(f, g);
}

TEST(EliminateDivision, DivisionFreeUnchanged) { EXPECT_EQ(eliminate_division(F("x > 0")), F("x > 0")); }
