// The elimination pipeline and its instrumentation.

#include <gtest/gtest.h>

#include "pow2qe/evaluator.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/pipeline.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

Formula F(const char* s) { return parse_formula(s); }

bool decide_qf(const Formula& g) {
  EXPECT_TRUE(is_quantifier_free(g));
  EXPECT_TRUE(free_vars(g).empty());
  return decide_ground_sentence(g);
}

}  // namespace

TEST(EliminateLambdaFromExistential, RoundingEquation) {
  Formula g = eliminate_lambda_from_existential(F("exists w. L(w) = 2"));
  EXPECT_FALSE(g.has_lambda());
  EXPECT_TRUE(decide_sentence(g));
}

TEST(EliminateLambdaFromExistential, RoundingFree) {
  Formula g = eliminate_lambda_from_existential(F("exists w. w > 1"));
  EXPECT_FALSE(g.has_lambda());
  EXPECT_TRUE(decide_sentence(g));
}

TEST(EliminateLambdaFromExistential, DivisibilityOfSum) {
  auto bs = lambda_free_branches({"w"}, F("D[2](w + 1)"));
  ASSERT_FALSE(bs.empty());
  for (const auto& b : bs) {
    EXPECT_FALSE(b.body.has_lambda());
    for_each_atom(b.body, [](const Formula& a) {
      if (a.kind() == FormulaKind::Dvd) EXPECT_TRUE(a.term().is_var()) << print(a);
    });
  }
  EXPECT_TRUE(decide_sentence(eliminate_lambda_from_existential(F("exists w. D[2](w + 1)"))));
}

TEST(Step1, SquareRootOfTwo) { EXPECT_TRUE(decide_sentence(step1_to_A_prefix(F("exists w. w*w = 2")))); }

TEST(Step1, ZeroBranch) { EXPECT_TRUE(decide_sentence(step1_to_A_prefix(F("exists w. w = 0")))); }

TEST(Step1, BranchesArePowerPrefixed) {
  auto bs = power_prefix_branches({"w"}, F("A(w) and w > 3"));
  ASSERT_FALSE(bs.empty());
  for (const auto& b : bs) EXPECT_TRUE(is_quantifier_free(b.body));
  EXPECT_TRUE(decide_sentence(step1_to_A_prefix(F("exists w. A(w) and w > 3"))));
}

TEST(Step2, TestFormula) { EXPECT_TRUE(decide_qf(step2_eliminate_A("x", F("3 < x and x < 5")))); }

TEST(Step2, EqualityBranch) { EXPECT_FALSE(decide_qf(step2_eliminate_A("x", F("x*x = 2")))); }

TEST(Step2, Unbounded) {
  Formula g = step2_eliminate_A("x", F("x > y"));
  EXPECT_TRUE(is_quantifier_free(g));
  for (const auto& y : {Rational(-5), Rational(0), Rational(1, 3), Rational(1024), Rational(7, 2)})
    EXPECT_TRUE(eval_qf(g, {{"y", y}})) << to_string(y);
}

TEST(Step2, ParametricWindow) {
  Formula g = step2_eliminate_A("x", F("y < x and x < 2*y and D[2](x)"));
  for (long k = -6; k <= 6; ++k) {
    Rational y = pow2(k) * Rational(3, 2);
    // The only power of two in (y, 2y) is 2^(k+1), which D_2 accepts when k is odd.
    EXPECT_EQ(eval_qf(g, {{"y", y}}), (k % 2 + 2) % 2 == 1) << k;
  }
}

TEST(EliminateBlock, TwoReals) { EXPECT_TRUE(decide_qf(eliminate_block(F("exists u v. u + v = 3 and u > 0 and v > 0")))); }

TEST(EliminateBlock, Contradiction) { EXPECT_FALSE(decide_qf(eliminate_block(F("exists u. u != u")))); }

TEST(EliminateBlock, EvenPowerBelowThree) {
  EXPECT_TRUE(decide_qf(eliminate_block(F("exists u. A(u) and D[2](u) and u < 3"))));
}

TEST(EliminateAll, Square) { EXPECT_TRUE(decide_qf(eliminate_all(F("forall x. x*x >= 0")))); }

TEST(EliminateAll, Density) {
  EXPECT_TRUE(decide_qf(eliminate_all(F("forall x. x > 0 -> exists y. A(y) and y <= x and x < 2*y"))));
}

TEST(EliminateAll, PowerPredicateIsD1) { EXPECT_FALSE(decide_qf(eliminate_all(F("exists x. A(x) and not D[1](x)")))); }

TEST(EliminateAll, QuantifierFreeInputIsEquivalent) {
  Formula f = F("L(x/y) = 2 and x > 1");
  Formula g = eliminate_all(f);
  EXPECT_TRUE(is_quantifier_free(g));
  EXPECT_FALSE(g.has_division());
  for (const auto& x : {Rational(-1), Rational(0), Rational(3), Rational(9, 2), Rational(10)})
    for (const auto& y : {Rational(-2), Rational(0), Rational(1), Rational(2)})
      EXPECT_EQ(eval_qf(f, {{"x", x}, {"y", y}}), eval_qf(g, {{"x", x}, {"y", y}}));
}

TEST(Prenex, RenamesApart) {
  Prenex p = prenex(F("(exists x. x > 0) and (forall x. x*x >= 0)"));
  ASSERT_EQ(p.prefix.size(), 2u);
  EXPECT_NE(p.prefix[0].second, p.prefix[1].second);
  EXPECT_TRUE(is_quantifier_free(p.matrix));
}

TEST(CollectStats, OneQuantifier) {
  GrowthReport r = collect_stats(F("exists x. A(x) and 3 < x and x < 5"));
  EXPECT_GE(r.iterations.size(), 1u);
  EXPECT_GT(r.result_length, 0u);
}

TEST(CollectStats, QuantifierFree) { EXPECT_TRUE(collect_stats(F("x > 1")).iterations.empty()); }

TEST(CollectStats, TwoQuantifiersAccumulate) {
  GrowthReport r = collect_stats(F("exists x. exists y. A(x) and A(y) and x < y and y < 4*x and D[2](y)"));
  std::size_t inner = 0;
  for (std::size_t i = 0; i < r.iterations.size(); ++i) {
    if (r.iterations[i].phase.find("eliminate_A") != std::string::npos) ++inner;
    if (i > 0) {
      EXPECT_GE(r.iterations[i].rcf_calls, r.iterations[i - 1].rcf_calls);
      EXPECT_GE(r.iterations[i].millis, r.iterations[i - 1].millis);
    }
  }
  EXPECT_GE(inner, 2u);
}

TEST(CollectStats, Json) {
  std::string j = collect_stats(F("exists x. A(x) and x > 1")).to_json();
  EXPECT_NE(j.find("\"iterations\""), std::string::npos);
  EXPECT_NE(j.find("\"length_Dn_weighted\""), std::string::npos);
  EXPECT_NE(j.find("\"result_length\""), std::string::npos);
}
