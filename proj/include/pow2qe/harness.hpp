#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pow2qe/evaluator.hpp"
#include "pow2qe/formula.hpp"
#include "pow2qe/mutation.hpp"

namespace pow2qe {

// ---------------------------------------------------------------------------
// Random instances

struct GenProfile {
  int depth = 2;                           // boolean connective depth
  std::vector<std::string> vars{"x", "y"};
  int lambda_nesting = 0;                  // exact maximum nesting of L
  std::vector<long> moduli;                // D_n atoms use only these n
  bool division = false;
  int max_degree = 2;
};

/// A quantifier-free formula, reproducible from the seed. With
/// lambda_nesting = k > 0 some atom carries k nested roundings.
Formula gen_formula(std::uint64_t seed, const GenProfile& profile);

/// A random term in the profile's language.
Term gen_term(std::mt19937_64& rng, const GenProfile& profile, int lambda_left);

/// Exact rationals mixing powers of two, small integers and fractions.
Rational sample_rational(std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Semantic checks of the individual rewrites

enum class LemmaOp {
  LambdaWindow,
  DnShiftCover,
  RewriteLambdaQuotient,
  QuotientNormalForm,
  ClearLambdaDivision,
  DnOfQuotient,
  EliminateDivision,
  LambdaPolyCases,
  LambdaPolyCasesEquality,
  LambdaPolyMonomial,
  SqueezeLambda,
  DnPolyCases,
  DnMonomialSplit,
  MakeSimple,
  ExponentPeriod,
};

const std::vector<LemmaOp>& all_lemma_ops();
std::string lemma_op_name(LemmaOp op);
std::optional<LemmaOp> lemma_op_from_name(const std::string& name);

struct Counterexample {
  Assignment assignment;
  bool expected = false;
  bool actual = false;
  std::string detail;
};

struct LemmaReport {
  LemmaOp op = LemmaOp::LambdaWindow;
  std::uint64_t seed = 0;
  std::string instance;
  std::size_t checked = 0;  // samples meeting the precondition
  std::optional<Counterexample> failure;
  std::vector<std::string> violations;  // syntactic postconditions
  bool passed() const { return !failure && violations.empty(); }
};

/// Builds the instance of `op` for `seed` and compares both sides at
/// `samples` exact points meeting the rewrite's precondition (x drawn from
/// powers of two where A(x) is assumed). Stops at the first failure.
LemmaReport check_lemma_equivalence(LemmaOp op, std::uint64_t seed, std::size_t samples);

struct SuiteOptions {
  std::size_t instances = 50;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  std::vector<LemmaOp> ops = all_lemma_ops();
  std::size_t threads = 0;  // 0: one per hardware thread
};

struct OpSummary {
  LemmaOp op = LemmaOp::LambdaWindow;
  std::size_t instances = 0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t violations = 0;
  std::optional<LemmaReport> first_failure;
};

struct SuiteSummary {
  std::vector<OpSummary> ops;
  bool passed() const;
  std::string to_json() const;
};

SuiteSummary run_lemma_suite(const SuiteOptions& options);

/// The rewrite a mutation corrupts.
LemmaOp mutation_target(Mutation m);

struct MutationOutcome {
  Mutation mutation = Mutation::None;
  bool detected = false;
  std::optional<LemmaReport> witness;
};

/// Runs the target's checks with the mutation active until one fails.
MutationOutcome check_mutation(Mutation m, std::size_t instances, std::size_t samples,
                               std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Oracles and the sentence corpus

/// Exact truth of exists x phi for phi a boolean combination of polynomial
/// comparisons in x with rational coefficients, by Sturm root isolation.
bool exists_univariate(const Formula& phi, const std::string& x);

/// Truth of a prenex sentence with every quantifier ranging over 2^k,
/// |k| <= bound.
bool eval_over_powers(const Formula& sentence, long bound);

enum class OracleKind {
  ExponentEnumeration,  // quantifiers over 2^k only
  WitnessSearch,        // one real quantifier, budgeted search
  RootIsolation,        // one real quantifier, polynomial body
  SampledOuter,         // forall x over a sample grid, inner over powers
};

std::string oracle_name(OracleKind k);

/// Truth of `sentence` according to `kind`.
bool derive_truth(const Formula& sentence, OracleKind kind);

struct CorpusItem {
  std::string text;
  Formula sentence;
  OracleKind oracle = OracleKind::WitnessSearch;
  bool truth = false;  // filled by derive_truth when the corpus is built
};

/// Sentences with truths recomputed by their oracles on every call.
std::vector<CorpusItem> sentence_corpus();

/// Parametric ordered-field instances for the real-closed-field kernel.
struct RcfInstance {
  std::string text;
  Formula formula;
  std::vector<std::string> params;
};

std::vector<RcfInstance> rcf_corpus();

/// Truth of an ordered-field sentence with at most two quantifiers: the
/// innermost by root isolation, an outer one over a rational grid.
bool rcf_oracle(const Formula& sentence);

}  // namespace pow2qe
