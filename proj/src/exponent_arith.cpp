#include "pow2qe/exponent_arith.hpp"

#include <functional>
#include <numeric>

#include "pow2qe/errors.hpp"
#include "pow2qe/mutation.hpp"
#include "pow2qe/normal_form.hpp"

namespace pow2qe {

ExponentConstraint::ExponentConstraint(std::string x, Formula theta)
    : x_(std::move(x)), theta_(std::move(theta)) {
  for_each_atom(theta_, [&](const Formula& a) {
    if (a.kind() == FormulaKind::True || a.kind() == FormulaKind::False) return;
    if (a.kind() != FormulaKind::Dvd) throw ContractError("exponent constraint: non-D atom");
    auto s = shift_of(a.term(), x_);
    if (!s) throw ContractError("exponent constraint: atom is not D_n(2^s " + x_ + ")");
    atoms_.emplace_back(a.modulus(), *s % a.modulus());
  });
}

Formula ExponentConstraint::atom(long n, long s, const std::string& x) {
  return dn_shift_atom(n, s, x);
}

long lcm_modulus(const ExponentConstraint& theta) {
  long m = 1;
  for (const auto& [n, s] : theta.atoms()) m = std::lcm(m, n);
  return m;
}

bool eval_theta_at_power(const ExponentConstraint& theta, long j) {
  const std::string& x = theta.var();
  std::function<bool(const Formula&)> go = [&](const Formula& f) -> bool {
    switch (f.kind()) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Dvd: {
        long n = f.modulus();
        long s = *shift_of(f.term(), x);
        return ((s + j) % n + n) % n == 0;
      }
      case FormulaKind::Not:
        return !go(f.sub());
      case FormulaKind::And:
        return go(f.left()) && go(f.right());
      case FormulaKind::Or:
        return go(f.left()) || go(f.right());
      default:
        throw ContractError("exponent constraint: unexpected formula");
    }
  };
  return go(theta.formula());
}

ThetaDecision decide_exists_theta(const ExponentConstraint& theta) {
  ThetaDecision d;
  d.period = lcm_modulus(theta);
  long stop = d.period;
  if (mutated(Mutation::ThetaTruncatedPeriod) && stop > 1) stop -= 1;
  for (long j = 0; j < stop; ++j) {
    if (eval_theta_at_power(theta, j)) {
      d.sat = true;
      d.witness = j;
      break;
    }
  }
  return d;
}

}  // namespace pow2qe
