#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pow2qe {

/// Deliberate faults in individual rewrites, used to confirm that the
/// equivalence checks can fail. Off unless a ScopedMutation is alive.
enum class Mutation {
  None,
  LambdaWindowDropLast,
  DnShiftCoverDropOne,
  RewriteQuotientSwap,
  DnOfQuotientSkipZero,
  QuotientNormalFormDropLast,
  LambdaPolyCasesDropTopDegree,
  LambdaPolyMonomialDouble,
  DnMonomialSplitShiftW,
  MakeSimpleShiftR,
  ThetaTruncatedPeriod,
};

const std::vector<Mutation>& all_mutations();
std::string mutation_name(Mutation m);
std::optional<Mutation> mutation_from_name(const std::string& name);

/// True when `m` is the active mutation on this thread.
bool mutated(Mutation m);

class ScopedMutation {
 public:
  explicit ScopedMutation(Mutation m);
  ~ScopedMutation();
  ScopedMutation(const ScopedMutation&) = delete;
  ScopedMutation& operator=(const ScopedMutation&) = delete;

 private:
  Mutation previous_;
};

}  // namespace pow2qe
