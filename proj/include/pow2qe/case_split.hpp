#pragma once

#include <vector>

#include "pow2qe/formula.hpp"

namespace pow2qe {

/// One branch of a provable finite case distinction.
template <class R>
struct Case {
  Formula guard;
  R result;
};

template <class R>
using CaseSplit = std::vector<Case<R>>;

/// The disjunction of all guards.
template <class R>
Formula guards_disjunction(const CaseSplit<R>& cs) {
  std::vector<Formula> gs;
  gs.reserve(cs.size());
  for (const auto& c : cs) gs.push_back(c.guard);
  return disj_all(gs);
}

}  // namespace pow2qe
