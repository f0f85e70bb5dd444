#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pow2qe/context.hpp"
#include "pow2qe/formula.hpp"

namespace pow2qe {

/// exists vars. (A(pow2_vars) and body), with pow2_vars a subset of vars.
struct ExistentialForm {
  std::vector<std::string> vars;
  std::vector<std::string> pow2_vars;
  Formula body;

  Formula to_formula() const;
};

/// Branches of an existential formula in which no rounding application
/// mentions a quantified variable and every D_n atom on quantified
/// variables is applied to a variable.
std::vector<ExistentialForm> lambda_free_branches(const std::vector<std::string>& vars,
                                                  const Formula& body, QeContext* ctx = nullptr);

/// The same as a formula. Input: a block exists w1 ... wk. psi with psi
/// quantifier-free and free of division.
Formula eliminate_lambda_from_existential(const Formula& block, QeContext* ctx = nullptr);

/// exists xs. (A(xs) and body).
struct PowerPrefixForm {
  std::vector<std::string> vars;
  Formula body;

  Formula to_formula() const;
};

/// Rewrites exists vars. psi into a disjunction of power-of-two prefixed
/// formulas; the real quantifiers that remain are eliminated with qe_rcf.
std::vector<PowerPrefixForm> power_prefix_branches(const std::vector<std::string>& vars,
                                                   const Formula& psi, QeContext* ctx = nullptr);

/// The same as a formula.
Formula step1_to_A_prefix(const Formula& block, QeContext* ctx = nullptr);

/// A quantifier-free equivalent of exists x. (A(x) and phi), phi
/// quantifier-free.
Formula step2_eliminate_A(const std::string& x, const Formula& phi, QeContext* ctx = nullptr);

/// A quantifier-free equivalent of exists vars. psi, psi quantifier-free.
Formula eliminate_block(const std::vector<std::string>& vars, const Formula& psi,
                        QeContext* ctx = nullptr);
Formula eliminate_block(const Formula& block, QeContext* ctx = nullptr);

struct Prenex {
  std::vector<std::pair<bool, std::string>> prefix;  // (is_exists, variable), outermost first
  Formula matrix;

  Formula to_formula() const;
};

/// Prenex form with every bound variable renamed apart.
Prenex prenex(const Formula& f, QeContext* ctx = nullptr);

/// A quantifier-free, division-free equivalent. Guardrail failures carry the
/// growth report gathered so far.
Formula eliminate_all(const Formula& f, QeContext* ctx = nullptr);

/// Truth of a sentence.
bool decide_sentence(const Formula& f, QeContext* ctx = nullptr);

/// Runs eliminate_all and returns the growth report.
GrowthReport collect_stats(const Formula& f, const Limits& limits = {});

}  // namespace pow2qe
