#include "run_report.hpp"

#include <cmath>
#include <sstream>

#include "documents.hpp"
#include "symcat/error.hpp"

namespace symcat::cli {

std::string RunReport::status() const {
  if (error) return "error";
  if (findings.empty()) return "error";
  for (const auto& f : findings)
    if (!f.passed()) return "fail";
  return "pass";
}

int RunReport::exit_code() const {
  const auto s = status();
  return s == "pass" ? 0 : s == "fail" ? 1 : 2;
}

json law_report_to_json(const LawReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back({{"law", v.law}, {"witness", v.witness}, {"detail", v.detail}});
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = encode_real(v);
  return {{"check", r.check},   {"cases", r.cases},   {"violation_count", r.violation_count},
          {"violations", violations}, {"metrics", metrics}, {"notes", r.notes},
          {"vacuous", r.vacuous}, {"status", r.status()}};
}

LawReport law_report_from_json(const json& j) {
  LawReport r(j.at("check").get<std::string>());
  r.cases = j.at("cases").get<std::size_t>();
  r.violation_count = j.at("violation_count").get<std::size_t>();
  for (const auto& v : j.at("violations"))
    r.violations.push_back({v.at("law").get<std::string>(), v.at("witness").get<std::vector<std::string>>(),
                            v.at("detail").get<std::string>()});
  for (auto it = j.at("metrics").begin(); it != j.at("metrics").end(); ++it)
    r.metrics[it.key()] = decode_real(it.value(), "metrics." + it.key());
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.vacuous = j.at("vacuous").get<bool>();
  return r;
}

json to_json(const RunReport& r) {
  json inputs = json::array();
  for (const auto& in : r.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  json findings = json::array();
  for (const auto& f : r.findings) findings.push_back(law_report_to_json(f));
  json out = {{"subcommand", r.subcommand}, {"inputs", inputs}, {"seed", r.seed},
              {"status", r.status()},       {"findings", findings}, {"data", r.data}};
  if (r.error) out["error"] = *r.error;
  if (r.seconds) out["seconds"] = *r.seconds;
  return out;
}

RunReport run_report_from_json(const json& j) {
  try {
    RunReport r;
    r.subcommand = j.at("subcommand").get<std::string>();
    for (const auto& in : j.at("inputs")) r.inputs.push_back({in.at("path").get<std::string>(), in.at("sha256").get<std::string>()});
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& f : j.at("findings")) r.findings.push_back(law_report_from_json(f));
    r.data = j.at("data");
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    if (j.contains("seconds")) r.seconds = j["seconds"].get<double>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("report: ") + e.what());
  }
}

namespace {

void dump(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      // nlohmann's default object type is an ordered std::map, so keys come sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        out += fmt_real(v);
      else
        out += encode_real(v).dump();
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  dump(j, out);
  return out;
}

std::string emit_json(const RunReport& r) { return canonical_dump(to_json(r)) + "\n"; }

std::string emit_human(const RunReport& r) {
  std::ostringstream os;
  os << r.subcommand << ": " << r.status() << "\n";
  if (r.error) os << "  error: " << *r.error << "\n";
  for (const auto& in : r.inputs) os << "  input " << in.path << " sha256:" << in.sha256.substr(0, 16) << "\n";
  os << "  seed " << r.seed << "\n";
  for (const auto& f : r.findings) {
    os << "  [" << f.status() << "] " << f.check << " cases=" << f.cases << " violations=" << f.violation_count;
    if (f.vacuous) os << " (vacuous)";
    os << "\n";
    for (const auto& [k, v] : f.metrics) os << "    " << k << " = " << fmt_real(v) << "\n";
    for (const auto& v : f.violations) {
      os << "    " << v.law << " at (";
      for (std::size_t i = 0; i < v.witness.size(); ++i) os << (i ? ", " : "") << v.witness[i];
      os << ")";
      if (!v.detail.empty()) os << ": " << v.detail;
      os << "\n";
    }
    if (f.violation_count > f.violations.size())
      os << "    ... " << (f.violation_count - f.violations.size()) << " more\n";
    for (const auto& n : f.notes) os << "    note: " << n << "\n";
  }
  for (auto it = r.data.begin(); it != r.data.end(); ++it) os << "  " << it.key() << " = " << canonical_dump(it.value()) << "\n";
  return os.str();
}

}  // namespace symcat::cli
