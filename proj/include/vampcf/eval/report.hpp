#pragma once

#include <ostream>
#include <string>

#include "vampcf/eval/evaluate.hpp"

namespace vampcf::eval {

/// JSON object: fingerprint, user counts and one entry per (metric, K).
std::string report_json(const MetricReport& report);

/// Aligned plain-text table, one line per (metric, K).
std::string report_table(const MetricReport& report);

/// `user_index,metric,k,value` rows; requires keep_per_user.
void write_per_user_csv(const MetricReport& report, std::ostream& out);

}  // namespace vampcf::eval
