#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pow2qe/formula.hpp"
#include "pow2qe/term.hpp"

namespace pow2qe {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("at " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Grammar (loosest binding first):
///   formula := ("exists" | "forall") var+ "." formula | iff
///   iff     := imp ("<->" imp)*        imp := or ("->" imp)?
///   or      := and ("or" and)*         and := not ("and" not)*
///   not     := "not" not | "true" | "false" | "A(" term ")"
///            | "D[" n "](" term ")" | term (rel term)+ | "(" formula ")"
///   rel     := "=" | "!=" | "<" | "<=" | ">" | ">="
///   term    := sums of products of "-"? factor, factor := atom ("^" int)?
///   atom    := numeral ("/" numeral)? | var | "L(" term ")" | "(" term ")"
/// 2^k with integer k is a power-of-two literal; t^n is repeated product.
/// Identifiers starting with '_' are reserved.
Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);

std::string print(const Formula& f);
std::string print(const Term& t);

}  // namespace pow2qe
