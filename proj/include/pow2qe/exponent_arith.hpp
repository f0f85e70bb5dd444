#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pow2qe/formula.hpp"

namespace pow2qe {

/// A boolean combination of atoms D_n(2^s x), 0 <= s < n, in one variable x.
class ExponentConstraint {
 public:
  /// Throws ContractError when an atom is not of the form D_n(2^s x) or a
  /// comparison atom occurs.
  ExponentConstraint(std::string x, Formula theta);

  /// The atom D_n(2^s x), s reduced mod n.
  static Formula atom(long n, long s, const std::string& x);

  const std::string& var() const { return x_; }
  const Formula& formula() const { return theta_; }
  /// (n, s) for every atom occurrence.
  const std::vector<std::pair<long, long>>& atoms() const { return atoms_; }

 private:
  std::string x_;
  Formula theta_;
  std::vector<std::pair<long, long>> atoms_;
};

/// Least common multiple of the moduli; 1 without atoms.
long lcm_modulus(const ExponentConstraint& theta);

/// Truth of theta at x = 2^j: D_n(2^s 2^j) holds iff n divides s + j.
bool eval_theta_at_power(const ExponentConstraint& theta, long j);

struct ThetaDecision {
  bool sat = false;
  long period = 1;
  /// Least j in [0, period) with theta(2^j), when sat.
  std::optional<long> witness;
};

/// Satisfiability of A(x) and theta, by evaluation over one period.
ThetaDecision decide_exists_theta(const ExponentConstraint& theta);

}  // namespace pow2qe
