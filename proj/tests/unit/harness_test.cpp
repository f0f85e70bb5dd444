// Generators, lemma checks, mutations and the oracles.

#include <gtest/gtest.h>

#include <functional>

#include "pow2qe/evaluator.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/harness.hpp"
#include "pow2qe/mutation.hpp"
#include "pow2qe/rcf.hpp"
#include "pow2qe/syntax.hpp"

using namespace pow2qe;

namespace {

std::size_t lambda_nesting(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lambda:
      return 1 + lambda_nesting(t.arg());
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div:
      return std::max(lambda_nesting(t.lhs()), lambda_nesting(t.rhs()));
    default:
      return 0;
  }
}

std::size_t lambda_nesting(const Formula& f) {
  std::size_t d = 0;
  for_each_term(f, [&](const Term& t) { d = std::max(d, lambda_nesting(t)); });
  return d;
}

}  // namespace

TEST(GenFormula, NoRoundingMeansPolynomialAtoms) {
  Formula f = gen_formula(0, GenProfile{2, {"x", "y"}, 0, {}, false, 2});
  EXPECT_FALSE(f.has_lambda());
  EXPECT_FALSE(f.has_division());
  for_each_atom(f, [](const Formula& a) { EXPECT_NE(a.kind(), FormulaKind::Dvd); });
}

TEST(GenFormula, NestedRounding) {
  GenProfile p;
  p.lambda_nesting = 2;
  EXPECT_EQ(lambda_nesting(gen_formula(1, p)), 2u);
}

TEST(GenFormula, ModuliPool) {
  GenProfile p;
  p.moduli = {2, 3};
  for (std::uint64_t seed = 2; seed < 40; ++seed)
    for_each_atom(gen_formula(seed, p), [](const Formula& a) {
      if (a.kind() == FormulaKind::Dvd) EXPECT_TRUE(a.modulus() == 2 || a.modulus() == 3);
    });
}

TEST(GenFormula, Deterministic) {
  GenProfile p{3, {"x", "y", "z"}, 2, {1, 2, 3}, true, 3};
  for (std::uint64_t seed = 0; seed < 100; ++seed) EXPECT_EQ(gen_formula(seed, p), gen_formula(seed, p));
  EXPECT_NE(gen_formula(1, p), gen_formula(2, p));
}

TEST(LemmaCheck, QuotientDivisibilityPasses) {
  LemmaReport r = check_lemma_equivalence(LemmaOp::DnOfQuotient, 0, 200);
  EXPECT_TRUE(r.passed()) << r.instance;
  EXPECT_GE(r.checked, 100u);
}

TEST(LemmaCheck, EveryOpPassesOneInstance) {
  for (LemmaOp op : all_lemma_ops()) {
    LemmaReport r = check_lemma_equivalence(op, 3, 50);
    EXPECT_TRUE(r.passed()) << lemma_op_name(op) << " " << r.instance;
    EXPECT_EQ(lemma_op_from_name(lemma_op_name(op)), op);
  }
}

// A rewrite that returns its input agrees with it at every point.
TEST(LemmaCheck, IdentityRewrite) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Formula f = gen_formula(seed, GenProfile{2, {"x", "y"}, 1, {2}, true, 2});
    std::function<Formula(const Formula&)> identity = [](const Formula& g) { return g; };
    Formula g = identity(f);
    for (long i = -3; i <= 3; ++i)
      for (const auto& y : {Rational(-1), Rational(0), Rational(5, 3)}) {
        Assignment s{{"x", pow2(i)}, {"y", y}};
        EXPECT_EQ(eval_qf(f, s), eval_qf(g, s));
      }
  }
}

TEST(Mutation, DroppedDisjunctIsCaught) {
  MutationOutcome m = check_mutation(Mutation::LambdaWindowDropLast, 20, 100);
  EXPECT_TRUE(m.detected);
  ASSERT_TRUE(m.witness);
  ASSERT_TRUE(m.witness->failure);
  EXPECT_NE(m.witness->failure->expected, m.witness->failure->actual);
}

TEST(Mutation, ScopeRestores) {
  {
    ScopedMutation s(Mutation::DnShiftCoverDropOne);
    EXPECT_TRUE(mutated(Mutation::DnShiftCoverDropOne));
  }
  EXPECT_FALSE(mutated(Mutation::DnShiftCoverDropOne));
  for (Mutation m : all_mutations()) EXPECT_EQ(mutation_from_name(mutation_name(m)), m);
}

TEST(Oracles, ExistsUnivariate) {
  EXPECT_TRUE(exists_univariate(parse_formula("x*x = 2"), "x"));
  EXPECT_FALSE(exists_univariate(parse_formula("x*x + 1 < 0"), "x"));
  EXPECT_TRUE(exists_univariate(parse_formula("x*x*x - x > 0 and x < 0"), "x"));
}

TEST(Oracles, EvalOverPowers) {
  EXPECT_FALSE(eval_over_powers(parse_formula("exists x. 4 < x and x < 8"), 20));
  EXPECT_TRUE(eval_over_powers(parse_formula("exists x. D[2](x) and not D[4](x)"), 20));
  EXPECT_TRUE(eval_over_powers(parse_formula("forall x. exists y. y*y = x*x and not y < x"), 10));
}

TEST(Corpus, Examples) {
  auto corpus = sentence_corpus();
  EXPECT_GE(corpus.size(), 50u);
  auto truth_of = [&](const char* text) -> std::optional<bool> {
    Formula f = parse_formula(text);
    for (const auto& it : corpus)
      if (it.sentence == f) return it.truth;
    return derive_truth(f, OracleKind::ExponentEnumeration);
  };
  EXPECT_EQ(truth_of("exists x. A(x) and 3 < x and x < 5"), true);
  EXPECT_EQ(truth_of("exists x. A(x) and 4 < x and x < 8"), false);
  EXPECT_EQ(truth_of("exists x. A(x) and D[2](x) and not D[4](x)"), true);
}

TEST(Corpus, RcfCorpusIsOrderedField) {
  auto rc = rcf_corpus();
  EXPECT_GE(rc.size(), 20u);
  for (const auto& it : rc) EXPECT_TRUE(is_ordered_field(it.formula)) << it.text;
}
