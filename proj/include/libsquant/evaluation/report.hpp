#pragma once

#include <ostream>

#include "json.hpp"
#include "libsquant/evaluation/benchmark.hpp"

namespace libsquant::evaluation {

inline constexpr int kReportFormatVersion = 1;

/// Versioned JSON. A pure function of the report's inputs: wall-clock times
/// are left out (see write_timings_csv). NaN is written as null.
nlohmann::json report_to_json(const EvaluationReport& report);

/// `model,mse_norm,mae_norm,mape_norm,mse_raw,mae_raw,mape_raw,slope`, one
/// row per model from the repeat medians. Failed models print `nan`.
void write_summary_csv(const EvaluationReport& report, std::ostream& out);

/// `repeat,model,seconds`.
void write_timings_csv(const EvaluationReport& report, std::ostream& out);

}  // namespace libsquant::evaluation
