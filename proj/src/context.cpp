#include "pow2qe/context.hpp"

#include "json.hpp"

namespace pow2qe {

std::string GrowthReport::to_json() const {
  nlohmann::json its = nlohmann::json::array();
  for (const auto& it : iterations) {
    its.push_back({{"phase", it.phase},
                   {"length_Dn_weighted", it.length_dn_weighted},
                   {"length_symbols", it.length_symbols},
                   {"rcf_calls", it.rcf_calls},
                   {"millis", it.millis}});
  }
  nlohmann::json j = {{"iterations", its}, {"result_length", result_length}};
  return j.dump();
}

QeContext::QeContext(Limits limits)
    : limits_(limits), start_(std::chrono::steady_clock::now()) {}

long long QeContext::elapsed_millis() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start_)
      .count();
}

void QeContext::check_time() {
  // the clock is cheap but not free; sample it
  if ((++tick_ & 63) != 0) return;
  if (elapsed_millis() > static_cast<long long>(limits_.max_seconds * 1000.0))
    throw GuardrailError("time limit exceeded", report_);
}

void QeContext::check_size(std::size_t size, const char* where) {
  if (size > limits_.max_size)
    throw GuardrailError(std::string("size limit exceeded in ") + where, report_);
}

std::string QeContext::fresh(const std::string& base) {
  return "_" + base + std::to_string(++counter_);
}

}  // namespace pow2qe
