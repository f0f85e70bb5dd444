// Parameter abstraction and the real-closed-field kernel.

#include <gtest/gtest.h>

#include "pow2qe/errors.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/harness.hpp"
#include "pow2qe/rcf.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

Formula F(const char* s) { return parse_formula(s); }

const std::vector<Rational> kGrid = {Rational(-3), Rational(-1), Rational(-1, 4), Rational(0),
                                     Rational(1, 2), Rational(1),  Rational(2),     Rational(4)};

}  // namespace

TEST(AbstractParams, SingleRounding) {
  auto a = abstract_params(F("exists z. z*z = L(y)"));
  ASSERT_EQ(a.abstraction.order.size(), 1u);
  EXPECT_EQ(a.abstraction.params.at(a.abstraction.order[0]), parse_term("L(y)"));
  EXPECT_TRUE(is_ordered_field(a.formula));
  EXPECT_EQ(a.abstraction.restore(a.formula), F("exists z. z*z = L(y)"));
}

TEST(AbstractParams, FieldFormulaUnchanged) {
  auto a = abstract_params(F("exists z. z > 2"));
  EXPECT_TRUE(a.abstraction.params.empty());
  EXPECT_EQ(a.formula, F("exists z. z > 2"));
}

TEST(AbstractParams, MaximalTerms) {
  auto a = abstract_params(F("exists z. z*L(y) > L(L(y))"));
  EXPECT_EQ(a.abstraction.params.size(), 2u);
  EXPECT_TRUE(is_ordered_field(a.formula));
}

TEST(AbstractParams, BoundVariableUnderRounding) {
  EXPECT_THROW(abstract_params(F("exists z. L(z) > 1")), ContractError);
}

TEST(QeRcf, Discriminant) {
  Formula g = qe_rcf(F("exists x. x*x + b*x + c = 0"));
  EXPECT_TRUE(is_quantifier_free(g));
  for (const auto& b : kGrid)
    for (const auto& c : kGrid)
      EXPECT_EQ(eval_qf(g, {{"b", b}, {"c", c}}), b * b - 4 * c >= 0) << to_string(b) << " " << to_string(c);
}

TEST(QeRcf, Unbounded) {
  Formula g = qe_rcf(F("exists x. x > a"));
  for (const auto& a : kGrid) EXPECT_TRUE(eval_qf(g, {{"a", a}}));
}

TEST(QeRcf, SquareRoot) {
  Formula g = qe_rcf(F("exists x. x*x = c"));
  EXPECT_FALSE(eval_qf(g, {{"c", Rational(-1)}}));
  EXPECT_TRUE(eval_qf(g, {{"c", Rational(0)}}));
  EXPECT_TRUE(eval_qf(g, {{"c", Rational(2)}}));
}

TEST(QeRcf, FreeVariablesShrink) {
  Formula g = qe_rcf(F("exists x. x*x < a and a < b"));
  for (const auto& v : free_vars(g)) EXPECT_TRUE(v == "a" || v == "b") << v;
}

TEST(QeRcf, AgreesWithRootIsolation) {
  for (const char* s : {"exists x. x*x*x - 2*x + 1 = 0 and x > 0", "exists x. x*x < 0",
                        "exists x. x*x - 3*x + 2 < 0 and x > 3/2", "exists x. x*x*x*x - 5*x*x + 4 = 0 and x < -3/2"}) {
    Formula f = F(s);
    EXPECT_EQ(decide_rcf_sentence(f), exists_univariate(f.sub(), f.var())) << s;
  }
}

TEST(DecideRcfSentence, Examples) {
  EXPECT_TRUE(decide_rcf_sentence(F("exists x. x*x = 2")));
  EXPECT_TRUE(decide_rcf_sentence(F("forall x. x*x >= 0")));
  EXPECT_FALSE(decide_rcf_sentence(F("exists x. x*x + 1 = 0")));
}
