// Divisibility constraints on the exponent of a power of two.

#include <gtest/gtest.h>

#include <numeric>

#include "pow2qe/errors.hpp"
#include "pow2qe/evaluator.hpp"
#include "pow2qe/exponent_arith.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

ExponentConstraint theta(const char* s) { return ExponentConstraint("x", parse_formula(s)); }

}  // namespace

TEST(LcmModulus, Examples) {
  EXPECT_EQ(lcm_modulus(theta("D[2](x) or D[3](2*x)")), 6);
  EXPECT_EQ(lcm_modulus(theta("D[4](x)")), 4);
  EXPECT_EQ(lcm_modulus(theta("true")), 1);
}

TEST(ExponentConstraint, RejectsComparisons) { EXPECT_THROW(theta("x > 1"), ContractError); }

// Shifts are taken mod n.
TEST(ExponentConstraint, ReducesWideShift) {
  ExponentConstraint th = theta("D[2](4*x)");
  for (long j = -6; j <= 6; ++j) EXPECT_EQ(eval_theta_at_power(th, j), j % 2 == 0) << j;
}

TEST(EvalThetaAtPower, Examples) {
  EXPECT_TRUE(eval_theta_at_power(theta("D[3](2*x)"), 2));
  EXPECT_TRUE(eval_theta_at_power(theta("D[2](x)"), 0));
  EXPECT_TRUE(eval_theta_at_power(theta("not D[2](x)"), 1));
}

TEST(EvalThetaAtPower, AgreesWithEvaluator) {
  ExponentConstraint th = theta("(D[2](x) and not D[3](2*x)) or D[5](4*x)");
  for (long j = -40; j <= 40; ++j)
    EXPECT_EQ(eval_theta_at_power(th, j), eval_qf(th.formula(), {{"x", pow2(j)}})) << j;
}

TEST(DecideExistsTheta, FourPeriod) {
  auto d = decide_exists_theta(theta("D[2](x) and not D[4](x)"));
  EXPECT_TRUE(d.sat);
  EXPECT_EQ(d.period, 4);
  EXPECT_EQ(d.witness, 2);
}

TEST(DecideExistsTheta, Contradiction) { EXPECT_FALSE(decide_exists_theta(theta("D[2](x) and not D[2](x)")).sat); }

TEST(DecideExistsTheta, PowerPredicate) {
  auto d = decide_exists_theta(theta("A(x)"));
  EXPECT_TRUE(d.sat);
  EXPECT_EQ(d.period, 1);
  EXPECT_EQ(d.witness, 0);
}

// Residue conditions that only meet beyond the smaller moduli.
TEST(DecideExistsTheta, ChineseRemainder) {
  auto d = decide_exists_theta(theta("D[4](2*x) and D[9](x)"));
  ASSERT_TRUE(d.sat);
  EXPECT_EQ(d.period, 36);
  EXPECT_EQ(d.witness, 27);
}
