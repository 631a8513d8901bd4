#include "symcat/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace symcat {

void LawReport::violate(std::string law, std::vector<std::string> witness, std::string detail) {
  ++violation_count;
  violations.push_back({std::move(law), std::move(witness), std::move(detail)});
}

void LawReport::track_max(const std::string& metric, double value) {
  auto [it, inserted] = metrics.try_emplace(metric, value);
  if (!inserted && (value > it->second || std::isnan(value))) it->second = value;
}

void LawReport::finalize(const CheckOptions& opts) {
  std::sort(violations.begin(), violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.witness, a.law, a.detail) < std::tie(b.witness, b.law, b.detail);
  });
  if (violations.size() > opts.max_witnesses) violations.resize(opts.max_witnesses);
}

void LawReport::merge(const LawReport& other) {
  cases += other.cases;
  violation_count += other.violation_count;
  for (const auto& v : other.violations) {
    violations.push_back({other.check + "/" + v.law, v.witness, v.detail});
  }
  for (const auto& [k, v] : other.metrics) track_max(other.check + "/" + k, v);
}

std::string fmt_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace symcat
