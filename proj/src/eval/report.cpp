#include "vampcf/eval/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace vampcf::eval {

std::string report_json(const MetricReport& report) {
  nlohmann::json j;
  j["fingerprint"] = report.fingerprint;
  j["evaluated_users"] = report.evaluated_users;
  j["skipped_users"] = report.skipped_users;
  j["metrics"] = nlohmann::json::array();
  for (const MetricRow& r : report.rows) {
    j["metrics"].push_back({{"metric", r.metric},
                            {"k", r.k},
                            {"mean", r.mean},
                            {"std_error", r.std_error},
                            {"users", r.users}});
  }
  return j.dump(2) + "\n";
}

std::string report_table(const MetricReport& report) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %8s\n", "metric", "mean", "std_err", "users");
  out << line;
  for (const MetricRow& r : report.rows) {
    const std::string name = r.metric + "@" + std::to_string(r.k);
    std::snprintf(line, sizeof line, "%-12s %10.5f %10.5f %8zu\n", name.c_str(), r.mean,
                  r.std_error, r.users);
    out << line;
  }
  out << "skipped users (empty heldout): " << report.skipped_users << "\n";
  return out.str();
}

void write_per_user_csv(const MetricReport& report, std::ostream& out) {
  out << "user_index,metric,k,value\n";
  char value[32];
  for (const UserMetric& m : report.per_user) {
    std::snprintf(value, sizeof value, "%.17g", m.value);
    out << m.user << ',' << m.metric << ',' << m.k << ',' << value << '\n';
  }
}

}  // namespace vampcf::eval
