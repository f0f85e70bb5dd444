#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "pow2qe/errors.hpp"

namespace pow2qe {

struct Limits {
  std::size_t max_size = 10'000'000;  // formula / DNF node cap
  double max_seconds = 1800.0;
  unsigned rcf_max_degree = 12;
  std::size_t rcf_max_cells = 2'000'000;
};

/// Per-query state: limits, deadline, counters and fresh-name supply.
class QeContext {
 public:
  explicit QeContext(Limits limits = {});

  const Limits& limits() const { return limits_; }

  /// Throws GuardrailError once the deadline has passed.
  void check_time();
  /// Throws GuardrailError when `size` exceeds the size cap.
  void check_size(std::size_t size, const char* where);

  /// A name beginning with '_' (reserved for internal use) never handed out
  /// before by this context.
  std::string fresh(const std::string& base);

  std::size_t rcf_calls() const { return rcf_calls_; }
  void count_rcf_call() { ++rcf_calls_; }
  std::size_t& rcf_cells() { return rcf_cells_; }

  long long elapsed_millis() const;

  GrowthReport& report() { return report_; }
  const GrowthReport& report() const { return report_; }

 private:
  Limits limits_;
  std::chrono::steady_clock::time_point start_;
  std::size_t counter_ = 0;
  std::size_t rcf_calls_ = 0;
  std::size_t rcf_cells_ = 0;
  std::size_t tick_ = 0;
  GrowthReport report_;
};

}  // namespace pow2qe
