#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pow2qe {

struct GrowthIteration {
  std::string phase;
  std::size_t length_dn_weighted = 0;
  std::size_t length_symbols = 0;
  std::size_t rcf_calls = 0;  // cumulative
  long long millis = 0;
};

struct GrowthReport {
  std::vector<GrowthIteration> iterations;
  std::size_t result_length = 0;

  std::string to_json() const;
};

/// A configurable size or time cap was exceeded. Carries the report gathered
/// so far.
class GuardrailError : public std::runtime_error {
 public:
  GuardrailError(const std::string& what, GrowthReport partial = {})
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const GrowthReport& partial() const { return partial_; }
  void set_partial(GrowthReport r) { partial_ = std::move(r); }

 private:
  GrowthReport partial_;
};

/// Normal-form conversion exceeded its node cap.
class BlowupError : public GuardrailError {
 public:
  using GuardrailError::GuardrailError;
};

/// An operation was called outside its precondition, or an internal
/// invariant failed.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pow2qe
