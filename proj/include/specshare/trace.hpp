#ifndef SPECSHARE_TRACE_HPP_
#define SPECSHARE_TRACE_HPP_

#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "specshare/metrics.hpp"

namespace specshare {

inline constexpr int kTraceVersion = 1;

// The recorded subset of StepMetrics that replay recomputes and compares.
nlohmann::json metrics_to_json(const StepMetrics& m);

struct ReplayReport {
  int steps = 0;
  int global_decisions = 0;
  int regional_decisions = 0;  // HAP-level decision events
  double max_abs_deviation = 0.0;
  int worst_line = 0;          // 1-based line number in the trace, 0 if none
  std::string worst_field;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Re-derives every step's metrics from the logged state (allocation, node
// positions, channel gains) and reports the largest absolute difference
// against the logged metrics. Throws TraceError on an empty or malformed
// trace.
ReplayReport replay_trace(std::istream& trace);

}  // namespace specshare

#endif  // SPECSHARE_TRACE_HPP_
