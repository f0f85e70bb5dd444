#include "pow2qe/mutation.hpp"

#include <utility>

namespace pow2qe {

namespace {

thread_local Mutation active = Mutation::None;

const std::vector<std::pair<Mutation, const char*>>& names() {
  static const std::vector<std::pair<Mutation, const char*>> table = {
      {Mutation::LambdaWindowDropLast, "lambda_window.drop_last"},
      {Mutation::DnShiftCoverDropOne, "dn_shift_cover.drop_one"},
      {Mutation::RewriteQuotientSwap, "rewrite_lambda_quotient.swap"},
      {Mutation::DnOfQuotientSkipZero, "dn_of_quotient.skip_zero"},
      {Mutation::QuotientNormalFormDropLast, "quotient_normal_form.drop_last"},
      {Mutation::LambdaPolyCasesDropTopDegree, "lambda_poly_cases.drop_top_degree"},
      {Mutation::LambdaPolyMonomialDouble, "lambda_poly_monomial.double"},
      {Mutation::DnMonomialSplitShiftW, "dn_monomial_split.shift_w"},
      {Mutation::MakeSimpleShiftR, "make_simple.shift_r"},
      {Mutation::ThetaTruncatedPeriod, "decide_exists_theta.truncated_period"},
  };
  return table;
}

}  // namespace

const std::vector<Mutation>& all_mutations() {
  static const std::vector<Mutation> all = [] {
    std::vector<Mutation> out;
    for (const auto& [m, n] : names()) out.push_back(m);
    return out;
  }();
  return all;
}

std::string mutation_name(Mutation m) {
  for (const auto& [k, n] : names())
    if (k == m) return n;
  return "none";
}

std::optional<Mutation> mutation_from_name(const std::string& name) {
  for (const auto& [k, n] : names())
    if (name == n) return k;
  return std::nullopt;
}

bool mutated(Mutation m) { return active == m; }

ScopedMutation::ScopedMutation(Mutation m) : previous_(std::exchange(active, m)) {}
ScopedMutation::~ScopedMutation() { active = previous_; }

}  // namespace pow2qe
