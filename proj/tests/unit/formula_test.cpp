// Terms, formulas, normal forms and the surface syntax.

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>

#include "pow2qe/evaluator.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/harness.hpp"
#include "pow2qe/normal_form.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

Formula F(const char* s) { return parse_formula(s); }
Term T(const char* s) { return parse_term(s); }

// Truth of two quantifier-free formulas agrees on a small rational grid.
void expect_equivalent(const Formula& a, const Formula& b, const std::vector<std::string>& vars) {
  const long vals[] = {-3, -1, 0, 1, 2, 3, 5, 8};
  std::vector<std::size_t> idx(vars.size(), 0);
  for (;;) {
    Assignment s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = Rational(vals[idx[i]]);
    ASSERT_EQ(eval_qf(a, s), eval_qf(b, s)) << print(a) << " vs " << print(b);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == std::size(vals)) idx[k++] = 0;
    if (k == idx.size()) break;
  }
}

}  // namespace

// ----------------------------------------------------------------------------
// Variables and substitution

TEST(FreeVars, BoundVariableExcluded) {
  EXPECT_EQ(free_vars(F("A(x) and exists y. y = x")), (std::set<std::string>{"x"}));
}

TEST(FreeVars, Atom) { EXPECT_EQ(free_vars(F("x + 1 = 0")), (std::set<std::string>{"x"})); }

TEST(FreeVars, ClosedSentence) { EXPECT_TRUE(free_vars(F("forall x. D[2](x)")).empty()); }

TEST(Substitute, Constant) { EXPECT_EQ(substitute(F("x > 0"), "x", Term::constant(2)), F("2 > 0")); }

TEST(Substitute, InsideDivisibility) {
  EXPECT_EQ(substitute(F("D[2](2*x)"), "x", Term::var("y")), F("D[2](2*y)"));
}

TEST(Substitute, InsideRounding) {
  EXPECT_EQ(substitute(F("L(x) = x"), "x", T("L(y)")), F("L(L(y)) = L(y)"));
}

TEST(Substitute, AvoidsCapture) {
  Formula g = substitute(F("exists y. y > x"), "x", Term::var("y"));
  ASSERT_EQ(g.kind(), FormulaKind::Exists);
  EXPECT_NE(g.var(), "y");
  EXPECT_EQ(free_vars(g), (std::set<std::string>{"y"}));
}

// ----------------------------------------------------------------------------
// Depth measures

TEST(LambdaDepth, Plain) { EXPECT_EQ(lambda_depth("x", T("x + 1")), 0u); }

TEST(LambdaDepth, OneRounding) { EXPECT_EQ(lambda_depth("x", T("L(x + 1)")), 1u); }

TEST(LambdaDepth, NestedAndParallel) { EXPECT_EQ(lambda_depth("x", T("L(L(x) + y) * L(y)")), 2u); }

TEST(DivLambdaDepth, Unrounded) { EXPECT_EQ(div_lambda_depth(T("x / y")), 0u); }

TEST(DivLambdaDepth, Rounded) { EXPECT_EQ(div_lambda_depth(T("L(x / y)")), 1u); }

TEST(DivLambdaDepth, Nested) { EXPECT_EQ(div_lambda_depth(T("L(L(x/y) + 1)")), 2u); }

// ----------------------------------------------------------------------------
// Normal forms

TEST(NormalizeAtoms, NegatedEquality) {
  Formula g = normalize_atoms(F("not (x = 3)"), "x");
  expect_equivalent(g, F("x - 3 > 0 or 3 - x > 0"), {"x"});
  for_each_atom(g, [](const Formula& a) { EXPECT_NE(a.kind(), FormulaKind::Not); });
}

TEST(NormalizeAtoms, StrictInequality) { expect_equivalent(normalize_atoms(F("x < 5"), "x"), F("5 - x > 0"), {"x"}); }

TEST(NormalizeAtoms, NegatedInequality) {
  Formula g = normalize_atoms(F("not (x < 5)"), "x");
  expect_equivalent(g, F("x - 5 > 0 or x - 5 = 0"), {"x"});
  bool negated = false;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    if (f.kind() == FormulaKind::Not && f.sub().kind() != FormulaKind::Dvd) negated = true;
    if (f.kind() == FormulaKind::And || f.kind() == FormulaKind::Or) {
      walk(f.left());
      walk(f.right());
    }
  };
  walk(g);
  EXPECT_FALSE(negated);
}

TEST(Dnf, Distributes) {
  Formula g = to_dnf(F("(a = 0 or b = 0) and c = 0"));
  EXPECT_EQ(disjuncts(g).size(), 2u);
  expect_equivalent(g, F("a = 0 and c = 0 or b = 0 and c = 0"), {"a", "b", "c"});
}

TEST(Dnf, PushesNegation) {
  Formula g = to_dnf(F("not (a = 0 and b = 0)"));
  EXPECT_EQ(disjuncts(g).size(), 2u);
  expect_equivalent(g, F("not a = 0 or not b = 0"), {"a", "b"});
}

TEST(Dnf, LiteralUnchanged) { EXPECT_EQ(to_dnf(F("a = 0")), F("a = 0")); }

TEST(IsSimpleIn, PolynomialAndShiftedDivisibility) { EXPECT_TRUE(is_simple_in("x", F("x*x - 2 > 0 and D[2](2*x)"))); }

TEST(IsSimpleIn, ShiftOutOfRange) { EXPECT_FALSE(is_simple_in("x", F("D[2](4*x)"))); }

TEST(IsSimpleIn, RoundedVariable) { EXPECT_FALSE(is_simple_in("x", F("L(x) = x"))); }

TEST(Simplify, TrueConjunct) { EXPECT_EQ(simplify(F("0 = 0 and x > 1")), simplify(F("x > 1"))); }

TEST(Simplify, GroundDivisibility) { EXPECT_TRUE(simplify(F("D[2](2)")).is_false()); }

TEST(Simplify, GroundComparison) { EXPECT_TRUE(simplify(F("1 < 2")).is_true()); }

TEST(Simplify, Idempotent) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Formula f = gen_formula(seed, GenProfile{2, {"x", "y"}, 1, {2, 3}, false, 2});
    Formula g = simplify(f);
    EXPECT_EQ(simplify(g), g) << print(f);
  }
}

// ----------------------------------------------------------------------------
// Syntax

TEST(Parse, TestFormula) {
  Formula f = F("exists x. A(x) and 3 < x and x < 5");
  ASSERT_EQ(f.kind(), FormulaKind::Exists);
  EXPECT_EQ(f.var(), "x");
  EXPECT_EQ(conjuncts(f.sub()).size(), 3u);
}

TEST(Parse, DivisibilityOfQuotient) {
  Formula f = F("D[3](L(y)/2)");
  ASSERT_EQ(f.kind(), FormulaKind::Dvd);
  EXPECT_EQ(f.modulus(), 3);
  EXPECT_EQ(f.term().kind(), TermKind::Div);
  EXPECT_EQ(f.term().lhs(), Term::lambda(Term::var("y")));
}

TEST(Parse, SugarDesugars) {
  Formula f = F("forall x. x*x >= 0");
  ASSERT_EQ(f.kind(), FormulaKind::Forall);
  ASSERT_EQ(f.sub().kind(), FormulaKind::Not);
  EXPECT_EQ(f.sub().sub().kind(), FormulaKind::Lt);
}

TEST(Parse, ReservedIdentifier) { EXPECT_THROW(F("_u > 0"), ParseError); }

TEST(Parse, ErrorPosition) {
  try {
    F("exists x. x <");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 13u);
  }
}

TEST(Print, Divisibility) { EXPECT_EQ(print(F("D[2](2*x)")), "D[2](2*x)"); }

TEST(Print, PowerOfTwoLiteral) { EXPECT_EQ(print(Term::pow2(3)), "2^3"); }

TEST(Print, SmallPowersCollapse) {
  EXPECT_EQ(print(Term::pow2(0)), "1");
  EXPECT_EQ(print(Term::pow2(1)), "2");
}

TEST(Print, Rounding) { EXPECT_EQ(print(Term::lambda(Term::var("x"))), "L(x)"); }

TEST(Print, LowestTerms) { EXPECT_EQ(print(Term::constant(Rational(6, 4))), "3/2"); }

TEST(Syntax, RoundTripOnGeneratedFormulas) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GenProfile p;
    p.depth = static_cast<int>(seed % 4);
    p.lambda_nesting = static_cast<int>(seed % 3);
    p.moduli = {1, 2, 3};
    p.division = seed % 2 == 1;
    Formula f = gen_formula(seed, p);
    if (seed % 5 == 0) f = Formula::exists("x", f);
    if (seed % 7 == 0) f = Formula::forall("y", f);
    ASSERT_EQ(parse_formula(print(f)), f) << print(f);
  }
}
