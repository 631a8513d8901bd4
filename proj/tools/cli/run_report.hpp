#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symcat/report.hpp"

namespace symcat::cli {

using nlohmann::json;

struct InputRef {
  std::string path;
  std::string sha256;
};

/// Outcome of one CLI run. Status is "pass", "fail" or "error".
struct RunReport {
  std::string subcommand;
  std::vector<InputRef> inputs;
  std::uint64_t seed = 0;
  std::vector<LawReport> findings;
  json data = json::object();
  std::optional<std::string> error;  // "<kind>: <message>" when status is "error"
  std::optional<double> seconds;     // only with --timing; omitted otherwise so bytes stay stable

  std::string status() const;
  int exit_code() const;  // 0 pass, 1 fail, 2 error or no check executed
};

json law_report_to_json(const LawReport& r);
LawReport law_report_from_json(const json& j);

json to_json(const RunReport& r);
RunReport run_report_from_json(const json& j);

/// Sorted keys, no whitespace, reals as "%.17g", non-finite reals as strings.
std::string canonical_dump(const json& j);
std::string emit_json(const RunReport& r);
/// Line-oriented summary with findings and data keys in sorted order.
std::string emit_human(const RunReport& r);

}  // namespace symcat::cli
