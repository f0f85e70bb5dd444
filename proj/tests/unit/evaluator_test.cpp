// Exact evaluation in the model and the witness search.

#include <gtest/gtest.h>

#include "pow2qe/errors.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/rational.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

Rational value(const char* t) { return eval_term(parse_term(t), {}); }
bool truth(const char* f, const Assignment& s = {}) { return eval_qf(parse_formula(f), s); }

}  // namespace

TEST(EvalTerm, RoundingOfInteger) { EXPECT_EQ(value("L(5)"), 4); }

TEST(EvalTerm, RoundingOfNegative) { EXPECT_EQ(value("L(-3)"), 0); }

TEST(EvalTerm, RoundingOfFraction) { EXPECT_EQ(value("L(1/3)"), Rational(1, 4)); }

TEST(EvalTerm, DivisionByZero) { EXPECT_EQ(value("7/(2 - 2)"), 0); }

TEST(EvalTerm, UnassignedVariable) { EXPECT_THROW(eval_term(parse_term("x"), {}), ContractError); }

TEST(EvalQf, DivisibilityOfNegativeExponent) { EXPECT_TRUE(truth("D[3](1/8)")); }

TEST(EvalQf, NotAPower) { EXPECT_FALSE(truth("A(6)")); }

TEST(EvalQf, DivisibilityOfRounding) { EXPECT_FALSE(truth("D[2](L(9))")); }

TEST(EvalQf, Assignment) { EXPECT_TRUE(truth("L(x) = 4 and y < x", {{"x", Rational(5)}, {"y", Rational(3, 2)}})); }

TEST(EvalQf, RejectsQuantifier) { EXPECT_THROW(truth("exists x. x = 1"), ContractError); }

TEST(DnHolds, Table) {
  EXPECT_TRUE(dn_holds(2, Rational(16)));
  EXPECT_FALSE(dn_holds(2, Rational(8)));
  EXPECT_TRUE(dn_holds(1, Rational(1, 2)));
  EXPECT_FALSE(dn_holds(1, Rational(3)));
  EXPECT_FALSE(dn_holds(1, Rational(0)));
  EXPECT_FALSE(dn_holds(2, Rational(-4)));
}

TEST(DecideGround, DoubledRounding) { EXPECT_TRUE(decide_ground_sentence(parse_formula("D[2](L(9)*2)"))); }

TEST(DecideGround, Conjunction) { EXPECT_TRUE(decide_ground_sentence(parse_formula("1 < 2 and A(2)"))); }

TEST(DecideGround, QuotientOfRoundings) {
  EXPECT_FALSE(decide_ground_sentence(parse_formula("D[4](L(100)/L(3))")));
}

TEST(WitnessSearch, PowerInInterval) {
  auto w = witness_search(parse_formula("A(x) and 3 < x and x < 5"), "x", {});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, 4);
}

TEST(WitnessSearch, NoPowerSquaresToTwo) {
  EXPECT_FALSE(witness_search(parse_formula("x*x = 2 and A(x)"), "x", {}));
}

TEST(WitnessSearch, Zero) {
  auto w = witness_search(parse_formula("x = 0"), "x", {});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, 0);
}

TEST(WitnessSearch, UsesAssignment) {
  auto w = witness_search(parse_formula("y < x and x < y + 2 and A(x)"), "x", {{"y", Rational(7)}});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, 8);
}

TEST(Rational, Helpers) {
  EXPECT_EQ(lambda_of(Rational(1)), 1);
  EXPECT_EQ(floor_log2(Rational(1, 3)), -2);
  EXPECT_EQ(exact_log2(Rational(1, 8)), -3);
  EXPECT_FALSE(exact_log2(Rational(6)));
  EXPECT_EQ(two_adic_valuation(Rational(12, 5)), 2);
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}
